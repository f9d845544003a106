//! Pairs of linear subspaces meeting linearly: adapted coordinates, the
//! excess sequence and its splittings, the diagonal trick and random pairs.

mod excess;
mod linalg;
mod pair;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use excess::{
    excess_sequence, find_module_splitting, random_invertible, verify_splitting, ExactnessReport, ExcessSequence,
    SplitOutcome, SplittingWitness,
};
pub use pair::{adapt_coordinates, Blocks, LinearCyclePair, PairInput, PairSummary};

use crate::error::{Error, Result};
use crate::polyring::{Field, OrderKind};

/// `X ⊂ A^m` given by independent equations, for the diagonal trick.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionInput {
    pub ambient: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<i64>>,
}

/// The pair `(Δ_Y, X × X)` in `Y × Y` for `X ⊂ Y = A^m`.
#[derive(Clone, Debug)]
pub struct DiagonalReduction {
    pub pair: LinearCyclePair,
    pub codim: usize,
    pub dim_x: usize,
}

/// Builds the doubled pair and checks its bookkeeping: excess rank equals
/// `codim(X in Y)`, `N*_{T/Y}` has rank `dim X` and `T ≅ Δ_X`.
pub fn reduction_to_diagonal(inner: &InclusionInput, field: Field, order: OrderKind) -> Result<DiagonalReduction> {
    let m = inner.ambient;
    if let Some(r) = inner.x.iter().find(|r| r.len() != m) {
        return Err(Error::NotContained(format!("equation with {} coefficients is not a form on A^{m}", r.len())));
    }
    let diag: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..2 * m).map(|j| if j == i { 1 } else if j == m + i { -1 } else { 0 }).collect())
        .collect();
    let mut square = Vec::with_capacity(2 * inner.x.len());
    for f in &inner.x {
        square.push([f.clone(), vec![0; m]].concat());
    }
    for f in &inner.x {
        square.push([vec![0; m], f.clone()].concat());
    }
    let pair = LinearCyclePair::adapt(&diag, &square, 2 * m, field, order).map_err(|e| match e {
        Error::Dependent { side, combination } if side == "Y" => {
            Error::Dependent { side: "X (doubled)".into(), combination }
        }
        e => e,
    })?;
    let c = inner.x.len();
    let b = pair.blocks();
    if b.r != c || b.p != m - c || b.q != c || b.s != m - c {
        return Err(Error::Invariant(format!("doubled pair has blocks {b:?} for codimension {c} in A^{m}")));
    }
    Ok(DiagonalReduction { pair, codim: c, dim_x: m - c })
}

/// Deterministic pseudo-random pair in `A^n` with both codimensions at most
/// `max_codim`; resamples until the equations are independent over `field`.
pub fn random_linear_pair(seed: u64, n: usize, max_codim: usize, field: Field) -> LinearCyclePair {
    assert!(n >= 1, "ambient dimension must be positive");
    let max_codim = max_codim.clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let form = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..n).map(|_| rng.gen_range(-2..=2)).collect() };
    loop {
        let cx = rng.gen_range(1..=max_codim);
        let cy = rng.gen_range(1..=max_codim);
        let shared = rng.gen_range(0..=cx.min(cy));
        let common: Vec<Vec<i64>> = (0..shared).map(|_| form(&mut rng)).collect();
        let mut xs = common.clone();
        xs.extend((shared..cx).map(|_| form(&mut rng)));
        let mut ys = common;
        ys.extend((shared..cy).map(|_| form(&mut rng)));
        // hide the shared forms behind row operations
        for rows in [&mut xs, &mut ys] {
            for i in 1..rows.len() {
                let c = rng.gen_range(-1..=1);
                let prev = rows[i - 1].clone();
                for (a, b) in rows[i].iter_mut().zip(prev) {
                    *a += c * b;
                }
            }
            rows.reverse();
        }
        if let Ok(pair) = LinearCyclePair::adapt(&xs, &ys, n, field, OrderKind::Degrevlex) {
            return pair;
        }
    }
}
