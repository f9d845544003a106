mod common;

use common::FP;
use di_core::graded_split::{
    euler_excess_example, find_graded_section, graded_hom_basis, hom_dimension, projective_ring, random_automorphism,
    random_split_surjection, GradedBundleMap, LineBundleSum, SectionOutcome,
};
use di_core::groebner::PolyMatrix;
use di_core::polyring::Field;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exponent vectors of length `arity` summing to `d`, by brute force.
fn count_monomials(arity: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    let d = d as usize;
    (0..(d + 1).pow(arity as u32))
        .filter(|code| {
            let mut c = *code;
            let mut sum = 0;
            for _ in 0..arity {
                sum += c % (d + 1);
                c /= d + 1;
            }
            sum == d
        })
        .count()
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(FP)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hom_dimension_counts_monomials(n in 1usize..=3, a in prop::collection::vec(-2i64..=2, 1..=3), b in prop::collection::vec(-2i64..=2, 1..=3)) {
        let (sa, sb) = (LineBundleSum::new(n, a.clone()), LineBundleSum::new(n, b.clone()));
        let brute: usize = a.iter().flat_map(|x| b.iter().map(move |y| count_monomials(n + 1, y - x))).sum();
        prop_assert_eq!(hom_dimension(&sa, &sb), brute);
        let ring = projective_ring(n, Field::Rational);
        prop_assert_eq!(graded_hom_basis(&ring, &sa, &sb).unwrap().len(), brute);
    }

    #[test]
    fn split_surjections_have_sections(n in 1usize..=3, seed in any::<u64>(), f in field()) {
        let pi = random_split_surjection(n, seed, f);
        let SectionOutcome::Section(s) = find_graded_section(&pi).unwrap() else {
            return Err(TestCaseError::fail("split surjection reported non-split"));
        };
        prop_assert_eq!(s.source.clone(), pi.target.clone());
        prop_assert_eq!(pi.matrix.mul(&s.matrix), PolyMatrix::identity(pi.ring(), pi.target.rank()));
    }

    #[test]
    fn euler_sequence_stays_non_split_under_automorphisms(n in 1usize..=3, seed in any::<u64>(), f in field()) {
        let pi = euler_excess_example(n, f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = random_automorphism(pi.ring(), &pi.source, &mut rng);
        let ring = pi.ring().clone();
        let moved = GradedBundleMap::new(pi.source.clone(), pi.target.clone(), pi.matrix.mul(&g)).unwrap();
        let SectionOutcome::NonSplit(cert) = find_graded_section(&moved).unwrap() else {
            return Err(TestCaseError::fail("the Euler surjection acquired a section"));
        };
        // no degree-zero maps O → O(−1)^{n+1}, so there is nothing to solve for
        prop_assert_eq!(cert.unknowns, 0);
        prop_assert!(cert.rank_augmented > cert.rank_matrix);
        // adding a trivial summand makes it split
        let source = LineBundleSum::new(n, [pi.source.twists.clone(), vec![0]].concat());
        let mut m = PolyMatrix::zeros(&ring, 1, source.rank());
        m.paste(0, 0, &moved.matrix);
        m.set(0, n + 1, ring.one());
        let widened = GradedBundleMap::new(source, pi.target.clone(), m).unwrap();
        prop_assert!(matches!(find_graded_section(&widened).unwrap(), SectionOutcome::Section(_)));
    }
}
