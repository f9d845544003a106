mod common;

use std::collections::BTreeMap;

use common::{field, poly, ring, terms};
use di_core::groebner::{span_contains, PolyMatrix};
use di_core::homalg::{tensor_complexes, ChainComplex, ChainMap};
use di_core::koszul::koszul_complex;
use di_core::polyring::{Polynomial, Ring};
use proptest::prelude::*;

fn koszul(r: &Ring, t: &[Vec<(Vec<u32>, i64)>]) -> ChainComplex {
    let seq: Vec<Polynomial> = t.iter().map(|x| poly(r, x)).collect();
    koszul_complex(&seq, r).unwrap()
}

fn seq_strategy(max: usize) -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64)>>> {
    prop::collection::vec(terms(3, 3, 2), 1..=max)
}

fn homology_ranks(c: &ChainComplex) -> Vec<usize> {
    c.degrees().map(|i| c.homology(i).unwrap().presentation.generic_rank()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn euler_characteristic_and_boundaries(s in seq_strategy(3), f in field()) {
        let r = ring(&["x", "y", "z"], f);
        let c = koszul(&r, &s);
        prop_assert!(c.validate().is_ok());
        let (terms, homology) = c.euler_characteristics().unwrap();
        prop_assert_eq!(terms, homology);
        for i in c.degrees() {
            let z = c.cycles(i).unwrap();
            let b = c.boundaries(i);
            prop_assert!(b.cols() == 0 || span_contains(&z, &b).unwrap());
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic(s in seq_strategy(3), f in field(), k in 2i64..5) {
        let r = ring(&["x", "y", "z"], f);
        let c = koszul(&r, &s);
        prop_assert!(ChainMap::identity(&c).is_quasi_iso().unwrap().quasi_isomorphism);
        // composing with the automorphism k·id keeps the verdict (k is a unit in every test field)
        let comps: BTreeMap<i32, PolyMatrix> =
            c.degrees().map(|i| (i, PolyMatrix::identity(&r, c.rank(i)).scale(&r.from_i64(k)))).collect();
        let scale = ChainMap::new(&c, &c, comps).unwrap();
        prop_assert!(scale.is_chain_map());
        let composite = scale.then(&ChainMap::identity(&c)).unwrap();
        prop_assert!(composite.is_quasi_iso().unwrap().quasi_isomorphism);
        // the zero map is a quasi-isomorphism only when the complex is acyclic
        let zero = ChainMap::zero(&c, &c).is_quasi_iso().unwrap().quasi_isomorphism;
        let acyclic = c.degrees().all(|i| c.homology(i).unwrap().presentation.is_zero().unwrap().is_zero());
        prop_assert_eq!(zero, acyclic);
    }

    #[test]
    fn tensor_is_associative_up_to_iso(a in terms(3, 2, 2), b in terms(3, 2, 2), c in terms(3, 2, 2), f in field()) {
        let r = ring(&["x", "y", "z"], f);
        let (ca, cb, cc) = (koszul(&r, &[a]), koszul(&r, &[b]), koszul(&r, &[c]));
        let left = tensor_complexes(&tensor_complexes(&ca, &cb).unwrap(), &cc).unwrap();
        let right = tensor_complexes(&ca, &tensor_complexes(&cb, &cc).unwrap()).unwrap();
        prop_assert_eq!(left.ranks(), right.ranks());
        prop_assert!(left.validate().is_ok() && right.validate().is_ok());
        prop_assert_eq!(homology_ranks(&left), homology_ranks(&right));
    }
}
