#![allow(dead_code)]

use di_core::cycles::{random_linear_pair, LinearCyclePair};
use di_core::polyring::{Field, Monomial, OrderKind, PolyRing, Polynomial, Ring};
use proptest::prelude::*;

pub const FP: Field = Field::Prime(32003);

pub fn ring(vars: &[&str], field: Field) -> Ring {
    PolyRing::new(vars, field, OrderKind::Degrevlex).unwrap()
}

pub fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(FP), Just(Field::Prime(7))]
}

/// Terms as `(exponents, coefficient)`; assembled once the ring is known.
pub fn terms(arity: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, arity), -5i64..=5), 0..=max_terms)
}

pub fn poly(r: &Ring, t: &[(Vec<u32>, i64)]) -> Polynomial {
    let f = r.field();
    Polynomial::from_terms(r, t.iter().map(|(e, c)| (Monomial::from_exponents(e), f.from_i64(*c))).collect())
}

pub fn pair(seed: u64, n: usize, field: Field) -> LinearCyclePair {
    random_linear_pair(seed, n, 3, field)
}

/// `(seed, n, field)` for a random adapted pair, kept small.
pub fn pair_params(max_n: usize) -> impl Strategy<Value = (u64, usize, Field)> {
    (any::<u64>(), 1..=max_n, prop_oneof![Just(Field::Rational), Just(FP)])
}
