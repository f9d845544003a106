mod common;

use common::{poly, ring, terms};
use di_core::polyring::{Field, Monomial, OrderKind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn add_sub_and_associativity(a in terms(3, 5, 3), b in terms(3, 5, 3), c in terms(3, 4, 2), fp in any::<bool>()) {
        let r = ring(&["x", "y", "z"], if fp { Field::Prime(32003) } else { Field::Rational });
        let (p, q, s) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(&(&(&p + &q) - &q), &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
    }

    #[test]
    fn print_parse_round_trip(a in terms(3, 6, 4), fp in any::<bool>()) {
        let r = ring(&["x", "y", "z"], if fp { Field::Prime(32003) } else { Field::Rational });
        let p = poly(&r, &a);
        let back = r.parse(&p.to_string()).unwrap();
        prop_assert_eq!(back.terms(), p.terms());
    }

    #[test]
    fn rational_coefficients_round_trip(num in -50i64..50, den in 1i64..20, e in 0u32..4) {
        let r = ring(&["x", "y"], Field::Rational);
        let s = format!("{num}/{den}*x^{e}*y - 1/{den}");
        let p = r.parse(&s).unwrap();
        prop_assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn orders_are_monomial_orders(a in prop::collection::vec(0u32..4, 3), b in prop::collection::vec(0u32..4, 3),
                                  m in prop::collection::vec(0u32..4, 3)) {
        let (a, b, m) = (Monomial::from_exponents(&a), Monomial::from_exponents(&b), Monomial::from_exponents(&m));
        for ord in [OrderKind::Lex, OrderKind::Deglex, OrderKind::Degrevlex] {
            prop_assert_eq!(ord.compare(&a, &b), ord.compare(&m.mul(&a), &m.mul(&b)));
            prop_assert!(ord.compare(&Monomial::one(3), &m).is_le());
        }
    }

    #[test]
    fn cross_field_operations_are_rejected(a in terms(2, 3, 2)) {
        let q = ring(&["x", "y"], Field::Rational);
        let p = ring(&["x", "y"], Field::Prime(32003));
        let (f, g) = (poly(&q, &a), poly(&p, &a));
        prop_assert!(f.try_add(&g).is_err());
        prop_assert!(f.try_mul(&g).is_err());
    }
}
