use serde::Serialize;

use super::{nu_matrix, term_rank, QuantizedCycle};
use crate::cycles::LinearCyclePair;
use crate::error::{Error, Result};
use crate::groebner::{ModulePresentation, PolyMatrix};
use crate::homalg::{check_presented_map, ChainComplex};
use crate::koszul::{binomial, ExteriorBasis};
use crate::polyring::{Polynomial, Ring};

/// `(P_σ)|_Y` with terms `Λ^{k+1}N*_{T/Y} ⊕ Λ^k N̂`, both over `O_T` and,
/// with the action of `N*_{T/Y}`, over `O_Y`.
#[derive(Clone, Debug)]
pub struct RestrictedAK {
    pub pair: LinearCyclePair,
    /// Basis of `Λ^• N*_{T/Y}` on `dx̲`.
    pub basis_ty: ExteriorBasis,
    /// Basis of `Λ^• N̂` on `dx̲, dt̲`.
    pub basis_hat: ExteriorBasis,
    pub over_t: ChainComplex,
    pub over_y: ChainComplex,
    /// Term ranks obtained by quotienting the AK terms by the `dt̲`-action.
    pub quotient_ranks: Vec<usize>,
    /// The projection from the AK term to the formula term is an
    /// isomorphism from the quotient, in every degree.
    pub quotient_matches: bool,
    /// The differential induced on the quotient is the formula's.
    pub differential_matches: bool,
}

impl RestrictedAK {
    /// Term ranks, degree `0` first.
    pub fn ranks(&self) -> Vec<usize> {
        self.over_t.ranks().iter().rev().copied().collect()
    }

    pub fn expected_ranks(&self) -> Vec<usize> {
        let b = self.pair.blocks();
        (0..=b.p + b.r).map(|k| binomial(b.p, k + 1) + binomial(b.p + b.r, k)).collect()
    }

    pub fn holds(&self) -> bool {
        self.ranks() == self.expected_ranks()
            && self.quotient_ranks == self.ranks()
            && self.quotient_matches
            && self.differential_matches
            && self.over_t.validate().is_ok()
            && self.over_y.validate().is_ok()
    }

    pub fn term_rank(&self, k: usize) -> usize {
        self.basis_ty.dim(k + 1) + self.basis_hat.dim(k)
    }

    /// `Λ^k N̂ → Λ^k N*_{T/Y}`, killing every wedge with a `dt`.
    pub fn projection(&self, ring: &Ring, k: usize) -> PolyMatrix {
        projection(ring, &self.basis_ty, &self.basis_hat, k)
    }
}

fn projection(ring: &Ring, ty: &ExteriorBasis, hat: &ExteriorBasis, k: usize) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(ring, ty.dim(k), hat.dim(k));
    for (j, s) in hat.subsets(k).iter().enumerate() {
        if let Some(i) = ty.index_of(s) {
            m.set(i, j, ring.one());
        }
    }
    m
}

fn restricted_differential(ring: &Ring, ty: &ExteriorBasis, hat: &ExteriorBasis, k: usize) -> PolyMatrix {
    let rows = ty.dim(k) + hat.dim(k - 1);
    let cols = ty.dim(k + 1) + hat.dim(k);
    let mut m = PolyMatrix::zeros(ring, rows, cols);
    m.paste(0, ty.dim(k + 1), &projection(ring, ty, hat, k).scale(&ring.from_i64(k as i64)));
    m
}

/// Relations of the degree `−k` term over `O_Y`: `x_a` kills the first
/// factor and sends `(0, e_S)` to `(dx_a ∧ e_S, 0)` projected to `N*_{T/Y}`.
pub(crate) fn restricted_relations(ring: &Ring, ty: &ExteriorBasis, hat: &ExteriorBasis, k: usize) -> PolyMatrix {
    let p = ty.rank();
    let top = ty.dim(k + 1);
    let n = top + hat.dim(k);
    let mut cols = Vec::new();
    for a in 0..p {
        let x = ring.variable(a);
        for i in 0..top {
            let mut v = vec![ring.zero(); n];
            v[i] = x.clone();
            cols.push(v);
        }
        for (j, s) in hat.subsets(k).iter().enumerate() {
            let mut v = vec![ring.zero(); n];
            v[top + j] = x.clone();
            if let Some((sign, u)) = ExteriorBasis::wedge(&[a], s) {
                if let Some(i) = ty.index_of(&u) {
                    v[i] = ring.from_i64(-sign);
                }
            }
            cols.push(v);
        }
    }
    let cols: Vec<_> = cols.into_iter().map(|c| crate::groebner::FreeModuleElem::new(ring, c)).collect();
    PolyMatrix::from_columns(ring, n, &cols).expect("lengths")
}

/// Restriction of the AK complex of `qc` to `Y`, with an independent check
/// by quotienting each AK term by the action of `dt̲`.
pub fn restrict_ak(qc: &QuantizedCycle, pair: &LinearCyclePair) -> Result<RestrictedAK> {
    if qc.pair().frame() != pair.frame() || qc.pair().ambient() != pair.ambient() {
        return Err(Error::NotAdapted("quantized cycle and pair use different coordinates".into()));
    }
    pair.verify_adapted()?;
    let b = pair.blocks();
    let c = b.p + b.r;
    let rt = pair.ring_t();
    let ry = pair.ring_y();
    let ty = ExteriorBasis::new(&pair.x_names().iter().map(|n| format!("d{n}")).collect::<Vec<_>>());
    let hat = qc.conormal_basis();
    let ranks: Vec<usize> = (0..=c).rev().map(|k| ty.dim(k + 1) + hat.dim(k)).collect();
    let over_t = ChainComplex::new(&rt, -(c as i32), ranks.clone(), (1..=c).rev().map(|k| restricted_differential(&rt, &ty, &hat, k)).collect());
    let over_y = ChainComplex::new(&ry, -(c as i32), ranks, (1..=c).rev().map(|k| restricted_differential(&ry, &ty, &hat, k)).collect())
        .with_term_relations((0..=c).rev().map(|k| restricted_relations(&ry, &ty, &hat, k)).collect())?;

    // independent route: over O_X, quotient by y̲ and by the dt̲-action
    let rx = pair.ring_x();
    let mut quotient_ranks = Vec::new();
    let mut quotient_matches = true;
    let mut differential_matches = true;
    let ak_diff = |k: usize| crate::koszul::ak_differential(&rx, &hat, k, k as i64);
    let proj_of = |k: usize| -> PolyMatrix {
        // AK term → formula term: keep dt-free wedges of the first factor
        let n_src = term_rank(&hat, k);
        let n_tgt = ty.dim(k + 1) + hat.dim(k);
        let mut m = PolyMatrix::zeros(&rx, n_tgt, n_src);
        m.paste(0, 0, &projection(&rx, &ty, &hat, k + 1));
        m.paste(ty.dim(k + 1), hat.dim(k + 1), &PolyMatrix::identity(&rx, hat.dim(k)));
        m
    };
    let y_vars: Vec<Polynomial> = pair.y_names().iter().map(|n| rx.var(n)).collect::<Result<_>>()?;
    for k in (0..=c).rev() {
        let n = term_rank(&hat, k);
        let mut rel = PolyMatrix::zeros(&rx, n, 0);
        for y in &y_vars {
            rel = rel.hstack(&PolyMatrix::identity(&rx, n).scale(y));
        }
        for a in b.p..c {
            rel = rel.hstack(&nu_matrix(&rx, &hat, k, a));
        }
        let rel = rel.nonzero_columns();
        let rank_t = n - rel.restrict_to(&rt)?.generic_rank();
        quotient_ranks.push(rank_t);
        let source = ModulePresentation::new(n, rel)?;
        let n_tgt = ty.dim(k + 1) + hat.dim(k);
        let mut tgt_rel = PolyMatrix::zeros(&rx, n_tgt, 0);
        for y in &y_vars {
            tgt_rel = tgt_rel.hstack(&PolyMatrix::identity(&rx, n_tgt).scale(y));
        }
        let target = ModulePresentation::new(n_tgt, tgt_rel)?;
        quotient_matches &= check_presented_map(&proj_of(k), &source, &target)?.is_iso();
        if k >= 1 {
            let lhs = proj_of(k - 1).mul(&ak_diff(k)).restrict_to(&rt)?;
            let rhs = restricted_differential(&rt, &ty, &hat, k).mul(&proj_of(k).restrict_to(&rt)?);
            differential_matches &= lhs == rhs;
        }
    }
    quotient_ranks.reverse();
    Ok(RestrictedAK { pair: pair.clone(), basis_ty: ty, basis_hat: hat, over_t, over_y, quotient_ranks, quotient_matches, differential_matches })
}

/// `F_level(Λ^k N̂)`: the span of basis wedges with at least `level` factors
/// among the `dt̲`.
#[derive(Clone, Debug, Serialize)]
pub struct LerayPiece {
    pub k: usize,
    pub level: usize,
    pub rank: usize,
    /// Basis wedges, as labels.
    pub basis: Vec<String>,
    /// Indices of those wedges in `Λ^k N̂`.
    pub indices: Vec<usize>,
}

impl LerayPiece {
    /// Inclusion `F_level → Λ^k N̂` over `ring`.
    pub fn inclusion(&self, ring: &Ring, dim: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, dim, self.indices.len());
        for (j, &i) in self.indices.iter().enumerate() {
            m.set(i, j, ring.one());
        }
        m
    }
}

pub fn leray_filtration(pair: &LinearCyclePair, k: usize, level: usize) -> Result<LerayPiece> {
    let b = pair.blocks();
    let c = b.p + b.r;
    if k > c {
        return Err(Error::DegreeOutOfRange { degree: -(k as i32), lo: -(c as i32), hi: 0 });
    }
    if level > k {
        return Err(Error::DegreeOutOfRange { degree: level as i32, lo: 0, hi: k as i32 });
    }
    let labels: Vec<String> = pair.conormal_names().iter().map(|n| format!("d{n}")).collect();
    let hat = ExteriorBasis::new(&labels);
    let mut indices = Vec::new();
    let mut names = Vec::new();
    for (i, s) in hat.subsets(k).iter().enumerate() {
        if s.iter().filter(|&&a| a >= b.p).count() >= level {
            indices.push(i);
            names.push(hat.label(s));
        }
    }
    Ok(LerayPiece { k, level, rank: indices.len(), basis: names, indices })
}

/// Ranks of `F_j / F_{j+1}` on `Λ^k N̂`, for `j = 0..=k`.
pub fn leray_graded_ranks(pair: &LinearCyclePair, k: usize) -> Result<Vec<usize>> {
    let mut ranks = Vec::new();
    for j in 0..=k {
        let here = leray_filtration(pair, k, j)?.rank;
        let next = if j < k { leray_filtration(pair, k, j + 1)?.rank } else { 0 };
        ranks.push(here - next);
    }
    Ok(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::adapt_coordinates;
    use crate::polyring::Field;

    fn pair(x: &[&[i64]], y: &[&[i64]], n: usize) -> LinearCyclePair {
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        adapt_coordinates(&v(x), &v(y), n, Field::Rational).unwrap()
    }

    fn running() -> LinearCyclePair {
        pair(&[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[&[0, 1, 0, 0], &[0, 0, 1, 0]], 4)
    }

    #[test]
    fn running_pair_ranks() {
        let p = running();
        let r = restrict_ak(&QuantizedCycle::canonical(&p), &p).unwrap();
        assert_eq!(r.ranks(), vec![2, 2, 1]);
        assert!(r.holds(), "{:?}", r.quotient_ranks);
    }

    #[test]
    fn transverse_is_the_ak_complex_of_t() {
        let p = pair(&[&[1, 0, 0]], &[&[0, 1, 0]], 3);
        let r = restrict_ak(&QuantizedCycle::canonical(&p), &p).unwrap();
        assert_eq!(r.ranks(), vec![2, 1]);
        assert_eq!(r.ranks(), crate::ak::ak_term_ranks(1));
        assert!(r.holds());
    }

    #[test]
    fn self_intersection_collapses() {
        let p = pair(&[&[1, 0, 0], &[0, 1, 0]], &[&[1, 0, 0], &[0, 1, 0]], 3);
        let r = restrict_ak(&QuantizedCycle::canonical(&p), &p).unwrap();
        assert_eq!(r.ranks(), vec![1, 2, 1]);
        assert!(r.holds());
    }

    #[test]
    fn twisted_quantization_restricts_to_the_same_ranks() {
        let p = running();
        let qc = QuantizedCycle::with_phi(&p, crate::ak::random_phi(&p, 9)).unwrap();
        assert!(restrict_ak(&qc, &p).unwrap().holds());
    }

    #[test]
    fn leray_examples() {
        let p = running();
        let f = leray_filtration(&p, 1, 1).unwrap();
        assert_eq!((f.rank, f.basis.clone()), (1, vec!["dt1".to_string()]));
        let f = leray_filtration(&p, 2, 1).unwrap();
        assert_eq!((f.rank, f.basis.clone()), (1, vec!["dx1^dt1".to_string()]));
        assert_eq!(leray_filtration(&p, 2, 0).unwrap().rank, 1);
        assert_eq!(leray_filtration(&p, 1, 0).unwrap().rank, 2);
        assert!(leray_filtration(&p, 3, 0).is_err());
        assert!(leray_filtration(&p, 1, 2).is_err());
    }

    #[test]
    fn leray_rank_formula_and_graded_pieces() {
        let p = pair(&[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0]], &[&[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 1, 0]], 6);
        let b = p.blocks();
        assert_eq!((b.p, b.r), (2, 2));
        for k in 0..=4 {
            let mut prev = usize::MAX;
            for level in 0..=k {
                let rank = leray_filtration(&p, k, level).unwrap().rank;
                let expected = binomial(4, k) - (0..level).map(|j| binomial(2, j) * binomial(2, k - j)).sum::<usize>();
                assert_eq!(rank, expected);
                assert!(rank <= prev);
                prev = rank;
            }
            let gr = leray_graded_ranks(&p, k).unwrap();
            assert_eq!(gr.iter().sum::<usize>(), binomial(4, k));
            for (j, g) in gr.iter().enumerate() {
                assert_eq!(*g, binomial(2, j) * binomial(2, k - j));
            }
            // the quotient by F_1 is the dt-free part Λ^k N*_{T/Y}
            assert_eq!(gr[0], binomial(b.p, k));
        }
    }
}
