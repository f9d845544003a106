mod common;

use common::{pair, FP};
use di_core::ak::{
    ak_complex, ak_term_ranks, change_quantization_iso, extract_splitting_from_formality, leray_filtration,
    leray_graded_ranks, psi_theta, random_phi, restrict_ak, QuantizedCycle,
};
use di_core::cycles::{excess_sequence, find_module_splitting, verify_splitting, SplitOutcome};
use di_core::koszul::{binomial, derived_restriction};
use di_core::polyring::Field;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (u64, usize, Field)> {
    (any::<u64>(), 1usize..=4, prop_oneof![Just(Field::Rational), Just(FP)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ak_complex_resolves_for_any_quantization((seed, n, f) in params(), phi_seed in any::<u64>()) {
        let p = pair(seed, n, f);
        let canonical = QuantizedCycle::canonical(&p);
        let phi = random_phi(&p, phi_seed);
        let twisted = canonical.shifted(&phi).unwrap();
        for qc in [&canonical, &twisted] {
            let data = ak_complex(qc).unwrap();
            prop_assert!(data.holds());
            let ranks: Vec<usize> = data.complex.ranks().iter().rev().copied().collect();
            prop_assert_eq!(ranks, ak_term_ranks(p.codim_x()));
        }
        let forward = change_quantization_iso(&canonical, &phi).unwrap();
        prop_assert!(forward.holds());
        let back = change_quantization_iso(&twisted, &phi.neg()).unwrap();
        prop_assert!(back.holds() && back.target.is_canonical());
    }

    #[test]
    fn restriction_has_the_expected_terms((seed, n, f) in params(), phi_seed in any::<u64>()) {
        let p = pair(seed, n, f);
        let b = p.blocks();
        let qc = QuantizedCycle::with_phi(&p, random_phi(&p, phi_seed)).unwrap();
        let res = restrict_ak(&qc, &p).unwrap();
        prop_assert!(res.holds());
        let expected: Vec<usize> = (0..=b.p + b.r).map(|k| binomial(b.p, k + 1) + binomial(b.p + b.r, k)).collect();
        prop_assert_eq!(res.ranks(), expected);
    }

    #[test]
    fn leray_filtration_is_decreasing(seed in any::<u64>(), n in 1usize..=5) {
        let p = pair(seed, n, Field::Rational);
        let b = p.blocks();
        for k in 0..=b.p + b.r {
            for level in 0..k {
                let big = leray_filtration(&p, k, level).unwrap();
                let small = leray_filtration(&p, k, level + 1).unwrap();
                prop_assert!(small.indices.iter().all(|i| big.indices.contains(i)));
            }
            prop_assert_eq!(leray_filtration(&p, k, 0).unwrap().rank, binomial(b.p + b.r, k));
            let graded = leray_graded_ranks(&p, k).unwrap();
            prop_assert_eq!(graded.iter().sum::<usize>(), binomial(b.p + b.r, k));
            for (j, &g) in graded.iter().enumerate() {
                prop_assert_eq!(g, binomial(b.r, j) * binomial(b.p, k - j));
            }
        }
    }

    #[test]
    fn theta_round_trips_to_a_splitting((seed, n, f) in params(), shear in any::<u64>()) {
        let p = pair(seed, n, f);
        let dr = derived_restriction(&p).unwrap();
        let ses = excess_sequence(&p).sheared(shear).unwrap();
        let SplitOutcome::Split(w) = find_module_splitting(&ses).unwrap() else {
            return Err(TestCaseError::fail("linear excess sequences split"));
        };
        let pt = psi_theta(&dr, &ses, &w).unwrap();
        prop_assert!(pt.verdict());
        let ex = extract_splitting_from_formality(&dr, &ses, &pt.theta).unwrap();
        prop_assert!(ex.holds());
        prop_assert!(verify_splitting(&ses, &ex.witness));
    }
}
