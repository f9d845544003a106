use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector; its length equals the arity of the ring it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[u32; 8]>,
}

impl Monomial {
    pub fn one(arity: usize) -> Monomial {
        Monomial { exps: SmallVec::from_elem(0, arity) }
    }

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        Monomial { exps: SmallVec::from_slice(exps) }
    }

    /// The monomial `x_var`.
    pub fn variable(arity: usize, var: usize) -> Monomial {
        let mut m = Monomial::one(arity);
        m.exps[var] = 1;
        m
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Monomial orders on a polynomial ring. Variables are ranked in ring order,
/// the first variable being the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    #[default]
    Degrevlex,
    Lex,
    Deglex,
}

impl OrderKind {
    pub fn parse(s: &str) -> Result<OrderKind> {
        match s {
            "degrevlex" | "grevlex" => Ok(OrderKind::Degrevlex),
            "lex" => Ok(OrderKind::Lex),
            "deglex" | "grlex" => Ok(OrderKind::Deglex),
            _ => Err(Error::Parse(format!("unknown monomial order `{s}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::Degrevlex => "degrevlex",
            OrderKind::Lex => "lex",
            OrderKind::Deglex => "deglex",
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            OrderKind::Lex => lex(a, b),
            OrderKind::Deglex => a.degree().cmp(&b.degree()).then_with(|| lex(a, b)),
            OrderKind::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        // smaller exponent in the last differing variable wins
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// Checked comparison for the public surface.
    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.arity() != b.arity() {
            return Err(Error::ArityMismatch { left: a.arity(), right: b.arity() });
        }
        Ok(self.compare(a, b))
    }
}

fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps.iter().zip(&b.exps) {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_degree_two_in_two_vars() {
        // sorted by the definition: x^2 > xy > y^2
        let mut ms = vec![m(&[0, 2]), m(&[2, 0]), m(&[1, 1])];
        ms.sort_by(|a, b| OrderKind::Degrevlex.compare(b, a));
        assert_eq!(ms, vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]);
        assert_eq!(OrderKind::Degrevlex.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn degrevlex_differs_from_deglex() {
        // x z vs y^2 in three variables
        let xz = m(&[1, 0, 1]);
        let yy = m(&[0, 2, 0]);
        assert_eq!(OrderKind::Deglex.compare(&xz, &yy), Ordering::Greater);
        assert_eq!(OrderKind::Degrevlex.compare(&xz, &yy), Ordering::Less);
    }

    #[test]
    fn lex_and_reflexivity() {
        assert_eq!(OrderKind::Lex.compare(&m(&[0, 1]), &m(&[1, 0])), Ordering::Less);
        assert_eq!(OrderKind::Lex.compare(&m(&[3, 1]), &m(&[3, 1])), Ordering::Equal);
        assert!(OrderKind::Lex.try_compare(&m(&[1]), &m(&[1, 0])).is_err());
    }

    #[test]
    fn lcm_and_division() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 3, 1]);
        assert_eq!(a.lcm(&b), m(&[2, 3, 1]));
        assert_eq!(a.quotient_of(&a.lcm(&b)), Some(m(&[0, 2, 1])));
        assert!(!a.is_coprime(&b));
        assert!(m(&[1, 0]).is_coprime(&m(&[0, 4])));
    }
}
