mod common;

use std::collections::BTreeMap;

use common::{field, pair, pair_params, poly, ring, terms};
use di_core::cycles::LinearCyclePair;
use di_core::groebner::PolyMatrix;
use di_core::homalg::{tensor_complexes, ChainMap, TensorLayout};
use di_core::koszul::{binomial, derived_restriction, gamma_chain_map, koszul_complex, tor_modules, tor_wedge_product};
use di_core::polyring::{Polynomial, Ring};
use proptest::prelude::*;

fn seq(r: &Ring, t: &[Vec<(Vec<u32>, i64)>]) -> Vec<Polynomial> {
    t.iter().map(|x| poly(r, x)).collect()
}

fn tor_ranks(p: &LinearCyclePair) -> Vec<usize> {
    let dr = derived_restriction(p).unwrap();
    let mut v: Vec<usize> = tor_modules(&dr).unwrap().iter().map(|t| t.generic_rank).collect();
    // the complex has length codim X; compare without the trailing zeros
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn koszul_ranks_are_binomial(s in prop::collection::vec(terms(3, 3, 2), 0..=4), f in field()) {
        let r = ring(&["x", "y", "z"], f);
        let c = koszul_complex(&seq(&r, &s), &r).unwrap();
        let n = s.len();
        let expected: Vec<usize> = (0..=n).rev().map(|k| binomial(n, k)).collect();
        prop_assert_eq!(c.ranks(), expected.as_slice());
        prop_assert!(c.validate().is_ok());
    }

    #[test]
    fn tor_is_symmetric((seed, n, f) in pair_params(4)) {
        let p = pair(seed, n, f);
        let swapped = LinearCyclePair::adapt(p.equations_y(), p.equations_x(), n, f, p.order()).unwrap();
        let ranks = tor_ranks(&p);
        prop_assert_eq!(&ranks, &tor_ranks(&swapped));
        let r = p.excess_rank();
        let expected: Vec<usize> = (0..=r).map(|k| binomial(r, k)).collect();
        prop_assert_eq!(ranks, expected);
    }

    #[test]
    fn gamma_satisfies_the_chain_law((seed, n, f) in pair_params(4)) {
        let g = gamma_chain_map(&pair(seed, n, f)).unwrap();
        prop_assert_eq!(g.map.chain_law_defect(), None);
        prop_assert!(g.unscaled.is_chain_map());
    }

    #[test]
    fn tor_products_are_exterior((seed, n, f) in pair_params(4)) {
        let p = pair(seed, n, f);
        let dr = derived_restriction(&p).unwrap();
        let tors = tor_modules(&dr).unwrap();
        let r = p.excess_rank();
        for i in 0..=r {
            for j in 0..=r - i {
                let w = tor_wedge_product(&dr, &tors, i, j).unwrap();
                prop_assert!(w.matches_exterior && w.generators_match && w.graded_commutative && w.identifications_inverse);
            }
        }
    }

    #[test]
    fn koszul_is_multiplicative(a in prop::collection::vec(terms(2, 2, 2), 0..=2), b in prop::collection::vec(terms(2, 2, 2), 0..=2), f in field()) {
        let r = ring(&["x", "y"], f);
        let (fa, fb) = (seq(&r, &a), seq(&r, &b));
        let (ka, kb) = (koszul_complex(&fa, &r).unwrap(), koszul_complex(&fb, &r).unwrap());
        let joined = koszul_complex(&[fa.clone(), fb.clone()].concat(), &r).unwrap();
        let tensor = tensor_complexes(&ka, &kb).unwrap();
        let layout = TensorLayout::new(&ka, &kb);
        let (n1, n2) = (fa.len(), fb.len());
        let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
            (0..1usize << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()).filter(|s| s.len() == k).collect()
        };
        // shuffle map e_S ⊗ e_T ↦ e_{S ∪ (T + n1)}; subsets are listed lexicographically in both
        let lex = |mut v: Vec<Vec<usize>>| { v.sort(); v };
        let mut comps = BTreeMap::new();
        for deg in joined.degrees() {
            let mut m = PolyMatrix::zeros(&r, joined.rank(deg), tensor.rank(deg));
            let target = lex(subsets(n1 + n2, (-deg) as usize));
            for i in ka.degrees() {
                let j = deg - i;
                if j < kb.lo() || j > kb.hi() {
                    continue;
                }
                for (sa, s) in lex(subsets(n1, (-i) as usize)).iter().enumerate() {
                    for (tb, t) in lex(subsets(n2, (-j) as usize)).iter().enumerate() {
                        let u: Vec<usize> = s.iter().copied().chain(t.iter().map(|x| x + n1)).collect();
                        let row = target.iter().position(|v| *v == u).unwrap();
                        let col = layout.index(&kb, i, sa, j, tb).unwrap();
                        m.set(row, col, r.one());
                    }
                }
            }
            comps.insert(deg, m);
        }
        let shuffle = ChainMap::new(&tensor, &joined, comps).unwrap();
        prop_assert!(shuffle.is_chain_map());
        prop_assert!(shuffle.is_quasi_iso().unwrap().quasi_isomorphism);
    }
}
