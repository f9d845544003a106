use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pair::LinearCyclePair;
use crate::error::{Error, Result};
use crate::groebner::{lift_columns, span_contains, syzygies, FreeModuleElem, ImageBasis, Lifted, PolyMatrix};
use crate::polyring::{Monomial, Ring};

/// `0 → E →α N̂* →π N*_{T/Y} → 0` over `O_T`, in some basis of `N̂*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessSequence {
    ring: Ring,
    alpha: PolyMatrix,
    pi: PolyMatrix,
    /// `G` with `v_this = G·v_canonical`, canonical basis `dx̲, dt̲`.
    change: PolyMatrix,
    change_inv: PolyMatrix,
    e_labels: Vec<String>,
    nhat_labels: Vec<String>,
    nty_labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub pi_alpha_zero: bool,
    pub alpha_injective: bool,
    pub pi_surjective: bool,
    pub exact_in_middle: bool,
    pub ranks_add_up: bool,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.pi_alpha_zero && self.alpha_injective && self.pi_surjective && self.exact_in_middle && self.ranks_add_up
    }
}

/// A section `s` of `π` and the retraction `ρ` of `α` it determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingWitness {
    pub section: PolyMatrix,
    pub retraction: PolyMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    Split(SplittingWitness),
    /// Basis vector `column` of the target does not lift through `π`.
    NonSplit { column: usize, remainder: String },
}

pub fn excess_sequence(pair: &LinearCyclePair) -> ExcessSequence {
    let ring = pair.ring_t();
    let b = pair.blocks();
    let (p, r) = (b.p, b.r);
    let mut alpha = PolyMatrix::zeros(&ring, p + r, r);
    for j in 0..r {
        alpha.set(p + j, j, ring.one());
    }
    let mut pi = PolyMatrix::zeros(&ring, p, p + r);
    for i in 0..p {
        pi.set(i, i, ring.one());
    }
    let d = |v: Vec<String>| v.into_iter().map(|n| format!("d{n}")).collect::<Vec<_>>();
    ExcessSequence {
        change: PolyMatrix::identity(&ring, p + r),
        change_inv: PolyMatrix::identity(&ring, p + r),
        alpha,
        pi,
        e_labels: d(pair.t_names()),
        nhat_labels: d(pair.conormal_names()),
        nty_labels: d(pair.x_names()),
        ring,
    }
}

impl ExcessSequence {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn alpha(&self) -> &PolyMatrix {
        &self.alpha
    }

    pub fn pi(&self) -> &PolyMatrix {
        &self.pi
    }

    pub fn rank_e(&self) -> usize {
        self.alpha.cols()
    }

    pub fn rank_nhat(&self) -> usize {
        self.alpha.rows()
    }

    pub fn rank_nty(&self) -> usize {
        self.pi.rows()
    }

    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.rank_e(), self.rank_nhat(), self.rank_nty())
    }

    pub fn labels(&self) -> (&[String], &[String], &[String]) {
        (&self.e_labels, &self.nhat_labels, &self.nty_labels)
    }

    /// Basis change from the canonical `dx̲, dt̲` coordinates.
    pub fn change_of_basis(&self) -> (&PolyMatrix, &PolyMatrix) {
        (&self.change, &self.change_inv)
    }

    /// Conjugates by `G`: `α' = G·α`, `π' = π·G⁻¹`.
    pub fn conjugated(&self, g: &PolyMatrix, g_inv: &PolyMatrix) -> Result<ExcessSequence> {
        let n = self.rank_nhat();
        if g.rows() != n || g.cols() != n || g_inv.rows() != n || g_inv.cols() != n {
            return Err(Error::Shape(format!("basis change must be {n}x{n}")));
        }
        if g.mul(g_inv) != PolyMatrix::identity(&self.ring, n) {
            return Err(Error::Degenerate("basis change is not inverted by the given matrix".into()));
        }
        let nhat_labels = (0..n).map(|i| format!("n{}", i + 1)).collect();
        Ok(ExcessSequence {
            ring: self.ring.clone(),
            alpha: g.mul(&self.alpha),
            pi: self.pi.mul(g_inv),
            change: g.mul(&self.change),
            change_inv: self.change_inv.mul(g_inv),
            e_labels: self.e_labels.clone(),
            nhat_labels,
            nty_labels: self.nty_labels.clone(),
        })
    }

    /// A random unipotent-times-permutation change of basis over `O_T`.
    pub fn sheared(&self, seed: u64) -> Result<ExcessSequence> {
        let (g, g_inv) = random_invertible(&self.ring, self.rank_nhat(), seed);
        self.conjugated(&g, &g_inv)
    }

    /// Retraction of this sequence expressed in canonical coordinates.
    pub fn canonical_retraction(&self, rho: &PolyMatrix) -> PolyMatrix {
        rho.mul(&self.change)
    }

    pub fn verify(&self) -> Result<ExactnessReport> {
        let ring = &self.ring;
        let (r, n, p) = self.ranks();
        let pi_alpha_zero = self.pi.mul(&self.alpha).is_zero();
        let alpha_injective = r == 0 || syzygies(&self.alpha)?.cols() == 0;
        let pi_surjective = span_contains(&self.pi, &PolyMatrix::identity(ring, p))?;
        let kernel = if p == 0 { PolyMatrix::identity(ring, n) } else { syzygies(&self.pi)? };
        let exact_in_middle = span_contains(&self.alpha, &kernel)?;
        Ok(ExactnessReport { pi_alpha_zero, alpha_injective, pi_surjective, exact_in_middle, ranks_add_up: r + p == n })
    }
}

/// Random `G` and `G⁻¹` over `ring`: a product of elementary matrices with
/// entries of degree ≤ 1, then a permutation.
pub fn random_invertible(ring: &Ring, n: usize, seed: u64) -> (PolyMatrix, PolyMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = PolyMatrix::identity(ring, n);
    let mut g_inv = PolyMatrix::identity(ring, n);
    if n < 2 {
        return (g, g_inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = ring.field().from_i64(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let mono = if ring.arity() > 0 && rng.gen_bool(0.5) {
            Monomial::variable(ring.arity(), rng.gen_range(0..ring.arity()))
        } else {
            Monomial::one(ring.arity())
        };
        let f = ring.monomial(mono, c);
        // row_i += f·row_j, inverse row_i −= f·row_j applied on the right
        let mut e = PolyMatrix::identity(ring, n);
        e.set(i, j, f.clone());
        let mut e_inv = PolyMatrix::identity(ring, n);
        e_inv.set(i, j, -&f);
        g = e.mul(&g);
        g_inv = g_inv.mul(&e_inv);
    }
    let k = rng.gen_range(0..n);
    let perm: Vec<usize> = (0..n).map(|i| (i + k) % n).collect();
    let pm = PolyMatrix::identity(ring, n).select_rows(&perm);
    let pm_inv = pm.transpose();
    (pm.mul(&g), g_inv.mul(&pm_inv))
}

/// Solves `π∘s = id` by lifting, then `ρ = α⁻¹∘(id − s∘π)`.
pub fn find_module_splitting(ses: &ExcessSequence) -> Result<SplitOutcome> {
    let ring = &ses.ring;
    let (r, n, p) = ses.ranks();
    let mut cols = Vec::with_capacity(p);
    if p > 0 {
        let image = ImageBasis::new(&ses.pi)?;
        for i in 0..p {
            match image.lift(&FreeModuleElem::basis(ring, p, i))? {
                Lifted::Lifted(c) => cols.push(c),
                Lifted::NotInImage(rem) => return Ok(SplitOutcome::NonSplit { column: i, remainder: rem.to_string() }),
            }
        }
    }
    let section = PolyMatrix::from_columns(ring, n, &cols)?;
    let complement = PolyMatrix::identity(ring, n).sub(&section.mul(&ses.pi));
    let retraction = if r == 0 {
        PolyMatrix::zeros(ring, 0, n)
    } else {
        lift_columns(&ses.alpha, &complement)?
    };
    let w = SplittingWitness { section, retraction };
    if !verify_splitting(ses, &w) {
        return Err(Error::Invariant("splitting identities fail".into()));
    }
    Ok(SplitOutcome::Split(w))
}

/// `π∘s = id` and `ρ∘α = id` as exact matrix identities.
pub fn verify_splitting(ses: &ExcessSequence, w: &SplittingWitness) -> bool {
    let (r, _, p) = ses.ranks();
    ses.pi.mul(&w.section) == PolyMatrix::identity(&ses.ring, p)
        && w.retraction.mul(&ses.alpha) == PolyMatrix::identity(&ses.ring, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Field;

    fn pair(x: &[&[i64]], y: &[&[i64]], n: usize) -> LinearCyclePair {
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        super::super::adapt_coordinates(&v(x), &v(y), n, Field::Rational).unwrap()
    }

    fn running() -> LinearCyclePair {
        pair(&[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[&[0, 1, 0, 0], &[0, 0, 1, 0]], 4)
    }

    #[test]
    fn running_pair_sequence() {
        let ses = excess_sequence(&running());
        assert_eq!(ses.ranks(), (1, 2, 1));
        assert!(ses.verify().unwrap().holds());
        let SplitOutcome::Split(w) = find_module_splitting(&ses).unwrap() else { panic!() };
        assert_eq!(w.section, PolyMatrix::parse(ses.ring(), &[vec!["1".into()], vec!["0".into()]]).unwrap());
        assert_eq!(w.retraction, PolyMatrix::parse(ses.ring(), &[vec!["0".into(), "1".into()]]).unwrap());
    }

    #[test]
    fn transverse_has_no_excess() {
        let ses = excess_sequence(&pair(&[&[1, 0]], &[&[0, 1]], 2));
        assert_eq!(ses.ranks(), (0, 1, 1));
        assert!(ses.verify().unwrap().holds());
        assert!(matches!(find_module_splitting(&ses).unwrap(), SplitOutcome::Split(_)));
    }

    #[test]
    fn self_intersection_alpha_is_identity() {
        let p = pair(&[&[1, 0, 0], &[0, 1, 0]], &[&[1, 0, 0], &[0, 1, 0]], 3);
        let ses = excess_sequence(&p);
        assert_eq!(ses.ranks(), (2, 2, 0));
        assert_eq!(ses.alpha(), &PolyMatrix::identity(ses.ring(), 2));
        assert!(ses.verify().unwrap().holds());
        let SplitOutcome::Split(w) = find_module_splitting(&ses).unwrap() else { panic!() };
        assert_eq!(w.section.cols(), 0);
        assert_eq!(w.retraction, PolyMatrix::identity(ses.ring(), 2));
    }

    #[test]
    fn sheared_sequences_still_split() {
        let base = excess_sequence(&pair(&[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0]], &[&[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0]], 5));
        for seed in 0..5 {
            let ses = base.sheared(seed).unwrap();
            assert!(ses.verify().unwrap().holds());
            let SplitOutcome::Split(w) = find_module_splitting(&ses).unwrap() else { panic!() };
            assert!(verify_splitting(&ses, &w));
            let canon = ses.canonical_retraction(&w.retraction);
            assert_eq!(canon.mul(base.alpha()), PolyMatrix::identity(base.ring(), 1));
        }
    }

    #[test]
    fn non_surjective_projection_does_not_split() {
        let ses = excess_sequence(&running());
        let ring = ses.ring().clone();
        let z = ring.var("z1").unwrap();
        let mut bad = ses.clone();
        bad.pi = ses.pi.scale(&z);
        match find_module_splitting(&bad).unwrap() {
            SplitOutcome::NonSplit { column, .. } => assert_eq!(column, 0),
            _ => panic!("z1·π has no section"),
        }
    }
}
