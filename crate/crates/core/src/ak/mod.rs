//! The quantization side: quantized cycles, the first formal neighborhood,
//! the Atiyah–Kashiwara complex and its change of quantization, the
//! restriction to `Y` with its Leray filtration, and the formality maps.

mod change;
mod formality;
mod restrict;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use change::{change_quantization_iso, DiffOp, DiffOpMatrix, QuantizationChange};
pub use formality::{
    atiyah_morphism, excess_complex, extract_splitting_from_formality, psi_theta, AtiyahMorphism, ExtractedSplitting,
    PsiTheta,
};
pub use restrict::{leray_filtration, leray_graded_ranks, restrict_ak, LerayPiece, RestrictedAK};

use crate::cycles::LinearCyclePair;
use crate::error::{Error, Result};
use crate::groebner::{lift_columns, PolyMatrix};
use crate::homalg::{check_presented_map, ChainComplex};
use crate::koszul::{binomial, ExteriorBasis};
use crate::polyring::{Polynomial, Ring};

/// The `X`-side of an adapted pair with the quantization `τ + φ`: `τ` is the
/// coordinate retraction and `φ : Ω¹_X → N*_{X/Z}` has rows indexed by the
/// conormal basis `dx̲, dt̲` and columns by the coordinates `y̲, z̲` of `X`.
#[derive(Clone, Debug)]
pub struct QuantizedCycle {
    pair: LinearCyclePair,
    phi: PolyMatrix,
}

impl QuantizedCycle {
    pub fn canonical(pair: &LinearCyclePair) -> QuantizedCycle {
        let rx = pair.ring_x();
        let c = pair.codim_x();
        QuantizedCycle { pair: pair.clone(), phi: PolyMatrix::zeros(&rx, c, rx.arity()) }
    }

    pub fn with_phi(pair: &LinearCyclePair, phi: PolyMatrix) -> Result<QuantizedCycle> {
        let rx = pair.ring_x();
        if phi.rows() != pair.codim_x() || phi.cols() != rx.arity() {
            return Err(Error::Shape(format!(
                "phi must be {}x{} (conormal directions by coordinates of X), got {}x{}",
                pair.codim_x(),
                rx.arity(),
                phi.rows(),
                phi.cols()
            )));
        }
        let phi = phi.embed_into(&rx).map_err(|_| Error::Parse("phi must only involve the coordinates of X".into()))?;
        Ok(QuantizedCycle { pair: pair.clone(), phi })
    }

    /// Parses `φ` over `O_X`; entries mentioning other variables are rejected.
    pub fn parse(pair: &LinearCyclePair, rows: &[Vec<String>]) -> Result<QuantizedCycle> {
        let rx = pair.ring_x();
        let phi = PolyMatrix::parse(&rx, rows)?;
        QuantizedCycle::with_phi(pair, phi)
    }

    pub fn pair(&self) -> &LinearCyclePair {
        &self.pair
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn ring(&self) -> Ring {
        self.pair.ring_x()
    }

    pub fn codim(&self) -> usize {
        self.pair.codim_x()
    }

    pub fn is_canonical(&self) -> bool {
        self.phi.is_zero()
    }

    /// Basis of `Λ^• N*_{X/Z}` on `dx̲, dt̲`.
    pub fn conormal_basis(&self) -> ExteriorBasis {
        let labels: Vec<String> = self.pair.conormal_names().iter().map(|n| format!("d{n}")).collect();
        ExteriorBasis::new(&labels)
    }

    /// `φ(df) = Σ_j ∂f/∂w_j · φ[:, j]`.
    pub fn phi_of_differential(&self, f: &Polynomial) -> Vec<Polynomial> {
        let rx = self.ring();
        let mut out = vec![rx.zero(); self.codim()];
        for j in 0..rx.arity() {
            let dj = f.derivative(j);
            if dj.is_zero() {
                continue;
            }
            for (a, o) in out.iter_mut().enumerate() {
                *o = &*o + &(&dj * self.phi.get(a, j));
            }
        }
        out
    }

    pub fn shifted(&self, phi: &PolyMatrix) -> Result<QuantizedCycle> {
        QuantizedCycle::with_phi(&self.pair, self.phi.add(&phi.embed_into(&self.ring())?))
    }
}

/// Random `φ` with entries of degree at most one and coefficients in `−2..=2`.
pub fn random_phi(pair: &LinearCyclePair, seed: u64) -> PolyMatrix {
    let rx = pair.ring_x();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = PolyMatrix::zeros(&rx, pair.codim_x(), rx.arity());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let mut f = rx.from_i64(rng.gen_range(-2..=2));
            for v in 0..rx.arity() {
                f = &f + &rx.variable(v).scale(&rx.field().from_i64(rng.gen_range(-1..=1)));
            }
            m.set(i, j, f);
        }
    }
    m
}

/// `O_X ⊕ N*_{X/Z}` with `(f, ν)(g, μ) = (fg, fμ + gν)`.
#[derive(Clone, Debug)]
pub struct FirstNeighborhoodModel {
    qc: QuantizedCycle,
}

/// An element `(f, ν)` of the first neighborhood.
pub type NeighborhoodElem = (Polynomial, Vec<Polynomial>);

impl FirstNeighborhoodModel {
    pub fn new(qc: &QuantizedCycle) -> FirstNeighborhoodModel {
        FirstNeighborhoodModel { qc: qc.clone() }
    }

    pub fn multiply(&self, a: &NeighborhoodElem, b: &NeighborhoodElem) -> NeighborhoodElem {
        let nu = a.1.iter().zip(&b.1).map(|(na, nb)| &(&a.0 * nb) + &(&b.0 * na)).collect();
        (&a.0 * &b.0, nu)
    }

    /// `O_Z → O_X ⊕ N*` in the splitting given by the quantization:
    /// `f ↦ (f|_X, Σ ∂f/∂w_a|_X dw_a − φ(d(f|_X)))`.
    pub fn structure_map(&self, f: &Polynomial) -> Result<NeighborhoodElem> {
        let pair = &self.qc.pair;
        let rz = pair.ring();
        let rx = pair.ring_x();
        let f = f.embed_into(&rz)?;
        let base = f.restrict_to(&rx)?;
        let phi = self.qc.phi_of_differential(&base);
        let mut nu = Vec::new();
        for (a, name) in pair.conormal_names().iter().enumerate() {
            let idx = rz.var_index(name).expect("conormal variable");
            nu.push(&f.derivative(idx).restrict_to(&rx)? - &phi[a]);
        }
        Ok((base, nu))
    }

    /// `N*·N* = 0`: products of two conormal elements vanish.
    pub fn square_zero(&self) -> bool {
        let rx = self.qc.ring();
        let c = self.qc.codim();
        (0..c).all(|a| {
            (0..c).all(|b| {
                let e = |i: usize| (rx.zero(), (0..c).map(|j| if j == i { rx.one() } else { rx.zero() }).collect());
                let (f, nu) = self.multiply(&e(a), &e(b));
                f.is_zero() && nu.iter().all(|n| n.is_zero())
            })
        })
    }
}

/// Degree `−k` AK layout: `Λ^{k+1}N*` first, then `Λ^k N*`.
pub(crate) fn term_rank(basis: &ExteriorBasis, k: usize) -> usize {
    basis.dim(k + 1) + basis.dim(k)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionCheck {
    /// `H⁰ ≅ O_X` via `1 ↦ (0, 1)`.
    pub h0_is_structure_sheaf: bool,
    /// Degrees `−k`, `k ≥ 1`, whose homology vanishes.
    pub vanishing: Vec<(i32, bool)>,
}

impl ResolutionCheck {
    pub fn holds(&self) -> bool {
        self.h0_is_structure_sheaf && self.vanishing.iter().all(|v| v.1)
    }
}

/// The AK complex `P_σ` over `O_X` with its `O_{X̄}`-action tables.
#[derive(Clone, Debug)]
pub struct AKComplexData {
    pub qc: QuantizedCycle,
    pub basis: ExteriorBasis,
    pub complex: ChainComplex,
    /// `nu_action[k][a]`: `dw_a` acting on the degree `−k` term.
    pub nu_action: Vec<Vec<PolyMatrix>>,
    /// `function_action[k][j]`: the `j`-th coordinate of `X` acting on the
    /// degree `−k` term, twisted by `φ`.
    pub function_action: Vec<Vec<PolyMatrix>>,
    pub squares_to_zero: bool,
    pub equivariant: bool,
    /// The action tables define a module over `O_X ⊕ N*`.
    pub action_is_module: bool,
    pub resolution: ResolutionCheck,
}

impl AKComplexData {
    /// Scalar by which the stored `d_{-k}` exceeds the plain composition.
    pub fn differential_scale(&self, k: usize) -> usize {
        k
    }

    pub fn holds(&self) -> bool {
        self.squares_to_zero && self.equivariant && self.action_is_module && self.resolution.holds()
    }
}

pub(crate) fn nu_matrix(ring: &Ring, basis: &ExteriorBasis, k: usize, a: usize) -> PolyMatrix {
    let c = basis.rank();
    let unit: Vec<Polynomial> = (0..c).map(|i| if i == a { ring.one() } else { ring.zero() }).collect();
    let n = term_rank(basis, k);
    let mut m = PolyMatrix::zeros(ring, n, n);
    if k < c {
        m.paste(0, basis.dim(k + 1), &basis.left_mult_matrix(ring, &unit, k));
    }
    m
}

pub(crate) fn function_matrix(qc: &QuantizedCycle, basis: &ExteriorBasis, k: usize, f: &Polynomial) -> PolyMatrix {
    let ring = qc.ring();
    let n = term_rank(basis, k);
    let mut m = PolyMatrix::identity(&ring, n).scale(f);
    if k < basis.rank() {
        let twist = basis.left_mult_matrix(&ring, &qc.phi_of_differential(f), k);
        let top = basis.dim(k + 1);
        let mut block = m.submatrix(0..top, top..n);
        block = block.add(&twist);
        m.paste(0, top, &block);
    }
    m
}

/// Builds `P_σ` and runs its checks. The scaling by `k` must be invertible.
pub fn ak_complex(qc: &QuantizedCycle) -> Result<AKComplexData> {
    let ring = qc.ring();
    let c = qc.codim();
    let ch = ring.field().characteristic();
    if ch > 0 {
        if let Some(k) = (2..=c).find(|k| k % ch as usize == 0) {
            return Err(Error::Characteristic { characteristic: ch, scale: k });
        }
    }
    let basis = qc.conormal_basis();
    let ranks: Vec<usize> = (0..=c).rev().map(|k| term_rank(&basis, k)).collect();
    let diffs: Vec<PolyMatrix> =
        (1..=c).rev().map(|k| crate::koszul::ak_differential(&ring, &basis, k, k as i64)).collect();
    let complex = ChainComplex::new(&ring, -(c as i32), ranks, diffs);
    let squares_to_zero = complex.validate().is_ok();

    let nu_action: Vec<Vec<PolyMatrix>> = (0..=c).map(|k| (0..c).map(|a| nu_matrix(&ring, &basis, k, a)).collect()).collect();
    let function_action: Vec<Vec<PolyMatrix>> = (0..=c)
        .map(|k| (0..ring.arity()).map(|j| function_matrix(qc, &basis, k, &ring.variable(j))).collect())
        .collect();

    // d_{-k} : term(k) → term(k−1) commutes with every action
    let mut equivariant = true;
    for k in 1..=c {
        let d = complex.differential(-(k as i32));
        for (src, tgt) in nu_action[k].iter().zip(&nu_action[k - 1]).chain(function_action[k].iter().zip(&function_action[k - 1])) {
            equivariant &= d.mul(src) == tgt.mul(&d);
        }
    }

    let mut action_is_module = true;
    for k in 0..=c {
        let nus = &nu_action[k];
        let fs = &function_action[k];
        for a in nus {
            for b in nus {
                action_is_module &= a.mul(b).is_zero();
            }
            for f in fs {
                action_is_module &= a.mul(f) == f.mul(a);
            }
        }
        for f in fs {
            for g in fs {
                action_is_module &= f.mul(g) == g.mul(f);
            }
        }
    }

    let resolution = resolution_check(&complex, &basis)?;
    Ok(AKComplexData {
        qc: qc.clone(),
        basis,
        complex,
        nu_action,
        function_action,
        squares_to_zero,
        equivariant,
        action_is_module,
        resolution,
    })
}

fn resolution_check(complex: &ChainComplex, basis: &ExteriorBasis) -> Result<ResolutionCheck> {
    let ring = complex.ring();
    let h0 = complex.homology(0)?;
    let n0 = term_rank(basis, 0);
    let mut unit = PolyMatrix::zeros(ring, n0, 1);
    unit.set(n0 - 1, 0, ring.one());
    let h0_is_structure_sheaf = match lift_columns(&h0.cycle_basis, &unit) {
        Ok(phi) => check_presented_map(&phi, &crate::groebner::ModulePresentation::free(ring, 1), &h0.presentation)?.is_iso(),
        Err(Error::NotSubmodule { .. }) => false,
        Err(e) => return Err(e),
    };
    let mut vanishing = Vec::new();
    for i in complex.lo()..0 {
        vanishing.push((i, complex.homology(i)?.presentation.is_zero()?.is_zero()));
    }
    Ok(ResolutionCheck { h0_is_structure_sheaf, vanishing })
}

/// Ranks `C(c, k+1) + C(c, k)` of the AK terms, degree `0` first.
pub fn ak_term_ranks(c: usize) -> Vec<usize> {
    (0..=c).map(|k| binomial(c, k + 1) + binomial(c, k)).collect()
}
