use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::linalg::{self, QMat};
use crate::error::{Error, Result};
use crate::groebner::{field_rank, ideal_basis};
use crate::polyring::{Coeff, Field, OrderKind, PolyRing, Polynomial, Ring};

/// Sizes of the coordinate blocks `(x̲, y̲, t̲, z̲)`: `X = V(x̲, t̲)`,
/// `Y = V(y̲, t̲)`, `T = V(x̲, y̲, t̲)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocks {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
}

/// Pair file: integer rows of linear forms in the ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairInput {
    pub ambient: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<i64>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<i64>>,
    /// Quantization offset, rows `dx, dt`, columns `y, z` of the adapted frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<String>>>,
}

/// Frame and blocks as reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub ambient: usize,
    pub blocks: Blocks,
    pub frame: Vec<Vec<i64>>,
    pub coordinates: Vec<String>,
    pub excess_rank: usize,
    pub transverse: bool,
}

/// Two linear subspaces of affine `n`-space through the origin, with an
/// adapted frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCyclePair {
    ambient: usize,
    field: Field,
    order: OrderKind,
    eq_x: Vec<Vec<i64>>,
    eq_y: Vec<Vec<i64>>,
    /// Row `i` expresses adapted coordinate `i` in the ambient ones.
    frame: Vec<Vec<i64>>,
    blocks: Blocks,
}

fn check_rows(side: &str, rows: &[Vec<i64>], n: usize) -> Result<()> {
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Shape(format!("{side} equation has {} coefficients in ambient dimension {n}", r.len())));
    }
    let q = linalg::to_q(rows);
    if linalg::rank(&q, n) < rows.len() {
        let dep = linalg::left_kernel(&q, n);
        let combination = linalg::to_i64_row(&linalg::primitive(&dep[0]))?;
        return Err(Error::Dependent { side: side.into(), combination });
    }
    Ok(())
}

/// Greedily extends `basis` by rows of `cands` that are independent of it.
fn extend(basis: &mut QMat, cands: &QMat, n: usize) -> Vec<Vec<BigInt>> {
    let mut added = Vec::new();
    for c in cands {
        if !linalg::in_span(basis, c, n) {
            let prim = linalg::primitive(c);
            basis.push(prim.iter().map(|x| BigRational::from_integer(x.clone())).collect());
            added.push(prim);
        }
    }
    added
}

fn coeff_rows(field: Field, rows: &[Vec<i64>]) -> Vec<Vec<Coeff>> {
    rows.iter().map(|r| r.iter().map(|&c| field.from_i64(c)).collect()).collect()
}

/// Adapted coordinates for `X = V(equationsX)`, `Y = V(equationsY)` in `A^n`.
pub fn adapt_coordinates(eq_x: &[Vec<i64>], eq_y: &[Vec<i64>], n: usize, field: Field) -> Result<LinearCyclePair> {
    LinearCyclePair::adapt(eq_x, eq_y, n, field, OrderKind::Degrevlex)
}

impl LinearCyclePair {
    pub fn adapt(eq_x: &[Vec<i64>], eq_y: &[Vec<i64>], n: usize, field: Field, order: OrderKind) -> Result<LinearCyclePair> {
        check_rows("X", eq_x, n)?;
        check_rows("Y", eq_y, n)?;
        let qx = linalg::to_q(eq_x);
        let qy = linalg::to_q(eq_y);

        // conormal intersection: a·X = −b·Y
        let mut stacked = qx.clone();
        stacked.extend(qy.iter().cloned());
        let ker = linalg::left_kernel(&stacked, n);
        let w: QMat = ker
            .iter()
            .map(|a| (0..n).map(|j| (0..qx.len()).fold(BigRational::zero(), |acc, i| acc + &a[i] * &qx[i][j])).collect())
            .collect();
        let (w_rref, _) = linalg::rref(&w, n);
        let t_rows: Vec<Vec<BigInt>> = w_rref.iter().map(|v| linalg::primitive(v)).collect();

        let t_q: QMat = t_rows.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let mut span_x = t_q.clone();
        let x_rows = extend(&mut span_x, &qx, n);
        let mut span_y = t_q.clone();
        let y_rows = extend(&mut span_y, &qy, n);

        let mut all: QMat = span_x.clone();
        all.extend(y_rows.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()));
        let units: QMat = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect())
            .collect();
        let z_rows = extend(&mut all, &units, n);

        let blocks = Blocks { p: x_rows.len(), q: y_rows.len(), r: t_rows.len(), s: z_rows.len() };
        let mut frame = Vec::with_capacity(n);
        for row in x_rows.iter().chain(&y_rows).chain(&t_rows).chain(&z_rows) {
            frame.push(linalg::to_i64_row(row)?);
        }
        let pair = LinearCyclePair { ambient: n, field, order, eq_x: eq_x.to_vec(), eq_y: eq_y.to_vec(), frame, blocks };
        pair.check_reduction()?;
        Ok(pair)
    }

    pub fn from_input(input: &PairInput, field: Field, order: OrderKind) -> Result<LinearCyclePair> {
        LinearCyclePair::adapt(&input.x, &input.y, input.ambient, field, order)
    }

    /// Over `F_p`, the frame must stay invertible and both equation sets
    /// independent after reduction.
    fn check_reduction(&self) -> Result<()> {
        if self.field == Field::Rational {
            return Ok(());
        }
        let n = self.ambient;
        let p = self.field.characteristic();
        if field_rank(self.field, &coeff_rows(self.field, &self.frame)) < n {
            return Err(Error::Degenerate(format!("adapted frame is singular modulo {p}")));
        }
        let b = self.blocks;
        if field_rank(self.field, &coeff_rows(self.field, &self.eq_x)) < b.p + b.r
            || field_rank(self.field, &coeff_rows(self.field, &self.eq_y)) < b.q + b.r
        {
            return Err(Error::Degenerate(format!("equations become dependent modulo {p}")));
        }
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> OrderKind {
        self.order
    }

    pub fn blocks(&self) -> Blocks {
        self.blocks
    }

    pub fn equations_x(&self) -> &[Vec<i64>] {
        &self.eq_x
    }

    pub fn equations_y(&self) -> &[Vec<i64>] {
        &self.eq_y
    }

    pub fn frame(&self) -> &[Vec<i64>] {
        &self.frame
    }

    pub fn codim_x(&self) -> usize {
        self.blocks.p + self.blocks.r
    }

    pub fn codim_y(&self) -> usize {
        self.blocks.q + self.blocks.r
    }

    pub fn excess_rank(&self) -> usize {
        self.blocks.r
    }

    pub fn is_transverse(&self) -> bool {
        self.blocks.r == 0
    }

    pub fn with_field(&self, field: Field) -> Result<LinearCyclePair> {
        let pair = LinearCyclePair { field, ..self.clone() };
        pair.check_reduction()?;
        Ok(pair)
    }

    pub fn summary(&self) -> PairSummary {
        PairSummary {
            ambient: self.ambient,
            blocks: self.blocks,
            frame: self.frame.clone(),
            coordinates: self.coordinate_names(),
            excess_rank: self.blocks.r,
            transverse: self.is_transverse(),
        }
    }

    fn block_names(prefix: &str, k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn x_names(&self) -> Vec<String> {
        Self::block_names("x", self.blocks.p)
    }

    pub fn y_names(&self) -> Vec<String> {
        Self::block_names("y", self.blocks.q)
    }

    pub fn t_names(&self) -> Vec<String> {
        Self::block_names("t", self.blocks.r)
    }

    pub fn z_names(&self) -> Vec<String> {
        Self::block_names("z", self.blocks.s)
    }

    /// Adapted coordinates in block order `x̲, y̲, t̲, z̲`.
    pub fn coordinate_names(&self) -> Vec<String> {
        [self.x_names(), self.y_names(), self.t_names(), self.z_names()].concat()
    }

    /// Conormal coordinates of `X`: `x̲, t̲`.
    pub fn conormal_names(&self) -> Vec<String> {
        [self.x_names(), self.t_names()].concat()
    }

    fn make_ring(&self, names: Vec<String>) -> Ring {
        PolyRing::new(&names, self.field, self.order).expect("generated names are valid")
    }

    /// `O_Z` in adapted coordinates.
    pub fn ring(&self) -> Ring {
        self.make_ring(self.coordinate_names())
    }

    /// `O_Z` in the original coordinates `u1..un`.
    pub fn ambient_ring(&self) -> Ring {
        self.make_ring(Self::block_names("u", self.ambient))
    }

    /// `O_X = k[y̲, z̲]`.
    pub fn ring_x(&self) -> Ring {
        self.make_ring([self.y_names(), self.z_names()].concat())
    }

    /// `O_Y = k[x̲, z̲]`.
    pub fn ring_y(&self) -> Ring {
        self.make_ring([self.x_names(), self.z_names()].concat())
    }

    /// `O_T = k[z̲]`.
    pub fn ring_t(&self) -> Ring {
        self.make_ring(self.z_names())
    }

    fn forms(&self, ring: &Ring, rows: &[Vec<i64>]) -> Vec<Polynomial> {
        rows.iter().map(|r| ring.linear_form(&r.iter().map(|&c| self.field.from_i64(c)).collect::<Vec<_>>())).collect()
    }

    pub fn ambient_equations_x(&self) -> Vec<Polynomial> {
        self.forms(&self.ambient_ring(), &self.eq_x)
    }

    pub fn ambient_equations_y(&self) -> Vec<Polynomial> {
        self.forms(&self.ambient_ring(), &self.eq_y)
    }

    /// Images of the ambient coordinates `u_i` in the adapted ring.
    pub fn ambient_to_adapted(&self) -> Result<Vec<Polynomial>> {
        let inv = linalg::inverse(&linalg::to_q(&self.frame)).ok_or_else(|| Error::Invariant("frame is singular".into()))?;
        let ring = self.ring();
        inv.iter()
            .map(|row| {
                let cs = row.iter().map(|q| self.field.from_rational(q)).collect::<Result<Vec<_>>>()?;
                Ok(ring.linear_form(&cs))
            })
            .collect()
    }

    /// Images of the adapted coordinates in the ambient ring.
    pub fn adapted_to_ambient(&self) -> Vec<Polynomial> {
        self.forms(&self.ambient_ring(), &self.frame)
    }

    fn transformed(&self, eqs: &[Polynomial]) -> Result<Vec<Polynomial>> {
        let img = self.ambient_to_adapted()?;
        let ring = self.ring();
        Ok(eqs.iter().map(|f| f.substitute(&ring, &img)).collect())
    }

    /// Checks that the frame turns both cycles into coordinate subspaces.
    pub fn verify_adapted(&self) -> Result<()> {
        let ring = self.ring();
        let b = self.blocks;
        let idx = |lo: usize, k: usize| (lo..lo + k).collect::<Vec<_>>();
        let not_x = [idx(b.p, b.q), idx(b.p + b.q + b.r, b.s)].concat();
        let not_y = [idx(0, b.p), idx(b.p + b.q + b.r, b.s)].concat();
        let tx = self.transformed(&self.ambient_equations_x())?;
        let ty = self.transformed(&self.ambient_equations_y())?;
        if let Some(f) = tx.iter().find(|f| !f.avoids(&not_x)) {
            return Err(Error::NotAdapted(format!("X equation becomes {f}")));
        }
        if let Some(f) = ty.iter().find(|f| !f.avoids(&not_y)) {
            return Err(Error::NotAdapted(format!("Y equation becomes {f}")));
        }
        let span = |fs: &[Polynomial]| -> usize {
            let rows: Vec<Vec<Coeff>> = fs
                .iter()
                .map(|f| (0..ring.arity()).map(|v| f.derivative(v).constant_term()).collect())
                .collect();
            field_rank(self.field, &rows)
        };
        if span(&tx) != b.p + b.r || span(&ty) != b.q + b.r {
            return Err(Error::NotAdapted("transformed equations do not span the coordinate conormals".into()));
        }
        Ok(())
    }

    /// `T` as `X ∩ Y` (transformed equations) and as `V(x̲, y̲, t̲)` have the
    /// same reduced Gröbner basis.
    pub fn t_presentations_agree(&self) -> Result<bool> {
        let ring = self.ring();
        let mut eqs = self.transformed(&self.ambient_equations_x())?;
        eqs.extend(self.transformed(&self.ambient_equations_y())?);
        let b = self.blocks;
        let coords: Vec<Polynomial> = (0..b.p + b.q + b.r).map(|i| ring.variable(i)).collect();
        let g1 = ideal_basis(&ring, &eqs)?;
        let g2 = ideal_basis(&ring, &coords)?;
        Ok(g1.generators() == g2.generators())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adapt(x: &[&[i64]], y: &[&[i64]], n: usize) -> Result<LinearCyclePair> {
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        adapt_coordinates(&v(x), &v(y), n, Field::Rational)
    }

    #[test]
    fn sheared_pair_in_three_space() {
        let pair = adapt(&[&[1, 1, 0], &[0, 0, 1]], &[&[1, -1, 0], &[0, 0, 1]], 3).unwrap();
        assert_eq!(pair.blocks(), Blocks { p: 1, q: 1, r: 1, s: 0 });
        pair.verify_adapted().unwrap();
        assert!(pair.t_presentations_agree().unwrap());
    }

    #[test]
    fn running_pair_is_a_fixed_point() {
        let pair = adapt(&[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[&[0, 1, 0, 0], &[0, 0, 1, 0]], 4).unwrap();
        assert_eq!(pair.blocks(), Blocks { p: 1, q: 1, r: 1, s: 1 });
        let id: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect();
        assert_eq!(pair.frame(), &id[..]);
        assert_eq!(pair.coordinate_names(), vec!["x1", "y1", "t1", "z1"]);
    }

    #[test]
    fn transverse_lines() {
        let pair = adapt(&[&[1, 0]], &[&[0, 1]], 2).unwrap();
        assert_eq!(pair.blocks(), Blocks { p: 1, q: 1, r: 0, s: 0 });
        assert!(pair.is_transverse());
    }

    #[test]
    fn dependent_equations_carry_a_certificate() {
        let err = adapt(&[&[1, 2, 0], &[2, 4, 0]], &[&[0, 0, 1]], 3).unwrap_err();
        match err {
            Error::Dependent { side, combination } => {
                assert_eq!(side, "X");
                assert_eq!(combination, vec![2, -1]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn generic_frame_verifies() {
        let pair = adapt(&[&[1, 2, 0, 1], &[0, 1, 1, 1]], &[&[1, 3, 1, 2], &[2, 0, 1, -1]], 4).unwrap();
        assert_eq!(pair.excess_rank(), 1);
        pair.verify_adapted().unwrap();
        assert!(pair.t_presentations_agree().unwrap());
        let fp = pair.with_field(Field::Prime(32003)).unwrap();
        fp.verify_adapted().unwrap();
    }

    #[test]
    fn bad_reduction_is_rejected() {
        // x1 + 3·x2 and x1 coincide modulo 3
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        let err = adapt_coordinates(&v(&[&[1, 3], &[1, 0]]), &v(&[]), 2, Field::Prime(3)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }
}
