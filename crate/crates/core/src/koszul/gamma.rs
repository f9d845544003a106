use std::collections::BTreeMap;

use serde::Serialize;

use super::{koszul_on, ExteriorBasis};
use crate::cycles::LinearCyclePair;
use crate::error::Result;
use crate::groebner::{FreeModuleElem, PolyMatrix};
use crate::homalg::{ChainComplex, ChainMap};
use crate::polyring::{Polynomial, Ring};

/// Relations presenting the AK term `Λ^{k+1}N* ⊕ Λ^k N*` over the ambient
/// ring: the conormal variables `w_a` kill the first factor and act on the
/// second by `w_a·(0, e_S) = (dw_a ∧ e_S, 0)`.
pub(crate) fn ak_term_relations(ring: &Ring, basis: &ExteriorBasis, conormal: &[Polynomial], k: usize) -> PolyMatrix {
    let top = basis.dim(k + 1);
    let n = top + basis.dim(k);
    let mut cols = Vec::new();
    for (a, w) in conormal.iter().enumerate() {
        for i in 0..top {
            cols.push(FreeModuleElem::basis(ring, n, i).scale(w));
        }
        for (j, s) in basis.subsets(k).iter().enumerate() {
            let mut v = FreeModuleElem::basis(ring, n, top + j).scale(w);
            if let Some((sign, u)) = ExteriorBasis::wedge(&[a], s) {
                let idx = basis.index_of(&u).expect("subset");
                let c = if sign > 0 { ring.from_i64(-1) } else { ring.one() };
                v.set(idx, &v.get(idx).clone() + &c);
            }
            cols.push(v);
        }
    }
    PolyMatrix::from_columns(ring, n, &cols).expect("column lengths")
}

/// `d_{-k}(a, b) = (scale(k)·b, 0)` on the AK terms.
pub(crate) fn ak_differential(ring: &Ring, basis: &ExteriorBasis, k: usize, scale: i64) -> PolyMatrix {
    // source Λ^{k+1} ⊕ Λ^k, target Λ^k ⊕ Λ^{k-1}
    let (src_top, src_bot) = (basis.dim(k + 1), basis.dim(k));
    let (tgt_top, tgt_bot) = (basis.dim(k), basis.dim(k - 1));
    let mut m = PolyMatrix::zeros(ring, tgt_top + tgt_bot, src_top + src_bot);
    for j in 0..src_bot {
        m.set(j, src_top + j, ring.from_i64(scale));
    }
    m
}

/// `γ : K(x̲, t̲) → P_τ` over `O_Z` for the canonical quantization.
#[derive(Clone, Debug)]
pub struct GammaMap {
    /// Target differential `(a, b) ↦ (k·b, 0)`.
    pub map: ChainMap,
    /// Same source, target differential `(a, b) ↦ (b, 0)`; its degree `−k`
    /// component is `k!` times that of `map`.
    pub unscaled: ChainMap,
    pub scaling: Vec<GammaScaling>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaScaling {
    pub degree: i32,
    /// Factor in `d_{-k}` relative to the unscaled composition.
    pub differential_scale: u64,
    /// Factor needed on `γ_{-k}` when the unscaled differential is used.
    pub gamma_scale: u64,
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

pub fn gamma_chain_map(pair: &LinearCyclePair) -> Result<GammaMap> {
    pair.verify_adapted()?;
    let ring = pair.ring();
    let names = pair.conormal_names();
    let labels: Vec<String> = names.iter().map(|n| format!("d{n}")).collect();
    let basis = ExteriorBasis::new(&labels);
    let conormal: Vec<Polynomial> = names.iter().map(|n| ring.var(n)).collect::<Result<_>>()?;
    let c = conormal.len();
    let source = koszul_on(&basis, &conormal, &ring);

    let ranks: Vec<usize> = (0..=c).rev().map(|k| basis.dim(k + 1) + basis.dim(k)).collect();
    let rels: Vec<PolyMatrix> = (0..=c).rev().map(|k| ak_term_relations(&ring, &basis, &conormal, k)).collect();
    let target = |scaled: bool| -> Result<ChainComplex> {
        let diffs = (1..=c).rev().map(|k| ak_differential(&ring, &basis, k, if scaled { k as i64 } else { 1 })).collect();
        ChainComplex::new(&ring, -(c as i32), ranks.clone(), diffs).with_term_relations(rels.clone())
    };
    let scaled_target = target(true)?;
    let unscaled_target = target(false)?;

    let mut comps = BTreeMap::new();
    let mut comps_unscaled = BTreeMap::new();
    let mut scaling = Vec::new();
    for k in 0..=c {
        let top = basis.dim(k + 1);
        let n = basis.dim(k);
        let mut m = PolyMatrix::zeros(&ring, top + n, n);
        for j in 0..n {
            m.set(top + j, j, ring.one());
        }
        let f = factorial(k);
        comps_unscaled.insert(-(k as i32), m.scale(&ring.from_i64(f as i64)));
        comps.insert(-(k as i32), m);
        scaling.push(GammaScaling { degree: -(k as i32), differential_scale: k.max(1) as u64, gamma_scale: f });
    }
    Ok(GammaMap {
        map: ChainMap::new(&source, &scaled_target, comps)?,
        unscaled: ChainMap::new(&source, &unscaled_target, comps_unscaled)?,
        scaling,
    })
}

/// The explicit value `(df|_X ∧ e_S, f|_X e_S)` of `γ(f·e_S)`, with entries
/// in `O_X`. `subset` indexes the conormal basis `dx̲, dt̲`.
pub fn gamma_formula(pair: &LinearCyclePair, f: &Polynomial, subset: &[usize]) -> Result<(FreeModuleElem, FreeModuleElem)> {
    let ring = pair.ring();
    let rx = pair.ring_x();
    let names = pair.conormal_names();
    let basis = ExteriorBasis::new(&names);
    let k = subset.len();
    let f = f.embed_into(&ring)?;
    let mut first = FreeModuleElem::zero(&rx, basis.dim(k + 1));
    for (a, name) in names.iter().enumerate() {
        let idx = ring.var_index(name).expect("conormal variable");
        let partial = f.derivative(idx).restrict_to(&rx)?;
        if partial.is_zero() {
            continue;
        }
        if let Some((sign, u)) = ExteriorBasis::wedge(&[a], subset) {
            let i = basis.index_of(&u).expect("subset");
            let term = if sign > 0 { partial } else { -&partial };
            first.set(i, first.get(i) + &term);
        }
    }
    let mut second = FreeModuleElem::zero(&rx, basis.dim(k));
    let j = basis.index_of(subset).expect("sorted subset");
    second.set(j, f.restrict_to(&rx)?);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::adapt_coordinates;
    use crate::groebner::span_contains;
    use crate::polyring::Field;

    fn running() -> LinearCyclePair {
        adapt_coordinates(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0]], &[vec![0, 1, 0, 0], vec![0, 0, 1, 0]], 4, Field::Rational)
            .unwrap()
    }

    #[test]
    fn gamma_is_a_chain_map_only_with_the_matching_scaling() {
        let g = gamma_chain_map(&running()).unwrap();
        assert!(g.map.is_chain_map());
        assert!(g.unscaled.is_chain_map());
        assert_eq!(g.scaling.iter().map(|s| s.gamma_scale).collect::<Vec<_>>(), vec![1, 1, 2]);
        // the unscaled differential with the unscaled γ breaks in degree −2
        let naive = ChainMap::new(g.unscaled.source(), g.unscaled.target(), g.map.components().clone()).unwrap();
        assert_eq!(naive.chain_law_defect(), Some(-2));
    }

    #[test]
    fn gamma_is_a_quasi_isomorphism() {
        let p = adapt_coordinates(&[vec![1, 0], vec![0, 1]], &[vec![1, 0], vec![0, 1]], 2, Field::Rational).unwrap();
        let g = gamma_chain_map(&p).unwrap();
        assert!(g.map.is_quasi_iso().unwrap().quasi_isomorphism);
    }

    #[test]
    fn formula_examples() {
        let p = running();
        let r = p.ring();
        let rx = p.ring_x();
        let (a, b) = gamma_formula(&p, &r.var("x1").unwrap(), &[]).unwrap();
        assert_eq!(a, FreeModuleElem::basis(&rx, 2, 0));
        assert!(b.is_zero());
        let (a, b) = gamma_formula(&p, &r.one(), &[0, 1]).unwrap();
        assert!(a.is_zero() && b == FreeModuleElem::basis(&rx, 1, 0));
        let (a, b) = gamma_formula(&p, &r.parse("y1*t1").unwrap(), &[1]).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn formula_is_the_module_action() {
        let p = running();
        let r = p.ring();
        let g = gamma_chain_map(&p).unwrap();
        for (f, subset) in [("x1^2*y1 + 3*t1*z1 - y1", vec![]), ("x1*t1 + y1*z1*t1 + 2", vec![1]), ("z1 + x1", vec![0])] {
            let f = r.parse(f).unwrap();
            let k = subset.len();
            let deg = -(k as i32);
            let basis = ExteriorBasis::new(&p.conormal_names());
            let j = basis.index_of(&subset).unwrap();
            let lhs = g.map.component(deg).column(j).scale(&f);
            let (a, b) = gamma_formula(&p, &f, &subset).unwrap();
            let rhs = a.concat(&b).embed_into(&r).unwrap();
            let diff = PolyMatrix::from_columns(&r, lhs.len(), &[lhs.sub(&rhs)]).unwrap();
            assert!(span_contains(&g.map.target().relations(deg), &diff).unwrap());
        }
    }
}
