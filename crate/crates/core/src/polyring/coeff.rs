//! Exact coefficient fields: arbitrary-precision rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime for the fast fuzzing field.
pub const DEFAULT_PRIME: u32 = 32003;

/// The coefficient field of a polynomial ring. Fixed per ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Validates `p` as an odd prime.
    pub fn prime(p: u32) -> Result<Field> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not an odd prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses the command-line spelling `qq` or `fp:<prime>`.
    pub fn parse(s: &str) -> Result<Field> {
        match s {
            "qq" | "QQ" | "Q" => Ok(Field::Rational),
            _ => match s.strip_prefix("fp:") {
                Some(p) => {
                    let p: u32 = p
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad prime in field spec `{s}`")))?;
                    Field::prime(p)
                }
                None => Err(Error::Parse(format!("unknown field `{s}` (expected qq or fp:<prime>)"))),
            },
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Coeff::Fp {
                value: n.rem_euclid(*p as i64) as u32,
                prime: *p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let r = n.mod_floor(&m);
                Coeff::Fp {
                    value: r.to_u32().expect("residue fits"),
                    prime: *p,
                }
            }
        }
    }

    /// Maps a rational into this field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Coeff> {
        match self {
            Field::Rational => Ok(Coeff::Q(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                let inv = den.inv().ok_or_else(|| {
                    Error::Parse(format!("denominator of {q} vanishes in {self}"))
                })?;
                Ok(&num * &inv)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "qq"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. Rationals are kept in lowest terms with positive
/// denominator (guaranteed by `BigRational`); prime-field elements carry
/// their modulus so arithmetic never needs a context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Fp { value: u32, prime: u32 },
}

impl Coeff {
    pub fn field(&self) -> Field {
        match self {
            Coeff::Q(_) => Field::Rational,
            Coeff::Fp { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp { value, .. } => *value == 1,
        }
    }

    /// True when the element prints with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_negative(),
            Coeff::Fp { value, prime } => *value > prime / 2,
        }
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Q(q) => Coeff::Q(q.recip()),
            Coeff::Fp { value, prime } => Coeff::Fp {
                value: pow_mod(*value as u64, (*prime - 2) as u64, *prime as u64) as u32,
                prime: *prime,
            },
        })
    }

    /// Integer value when the element is an integer (rationals) or its
    /// symmetric representative (prime fields).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Coeff::Q(q) if q.is_integer() => q.numer().to_i64(),
            Coeff::Q(_) => None,
            Coeff::Fp { value, prime } => {
                let v = *value as i64;
                Some(if v > (*prime / 2) as i64 { v - *prime as i64 } else { v })
            }
        }
    }

    fn check(&self, other: &Coeff) {
        assert_eq!(
            self.field(),
            other.field(),
            "coefficient fields never mix (checked at the ring level)"
        );
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        self.check(rhs);
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a + b),
            (Coeff::Fp { value: a, prime }, Coeff::Fp { value: b, .. }) => Coeff::Fp {
                value: ((*a as u64 + *b as u64) % *prime as u64) as u32,
                prime: *prime,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        self.check(rhs);
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Fp { value: a, prime }, Coeff::Fp { value: b, .. }) => Coeff::Fp {
                value: ((*a as u64 * *b as u64) % *prime as u64) as u32,
                prime: *prime,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Fp { value, prime } => Coeff::Fp {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            },
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Fp { .. } => write!(f, "{}", self.to_i64().expect("symmetric representative")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_normalize() {
        let q = Field::Rational
            .from_rational(&BigRational::new(BigInt::from(4), BigInt::from(-6)))
            .unwrap();
        assert_eq!(q.to_string(), "-2/3");
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let a = f.from_i64(12345);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(f.from_i64(-1).to_string(), "-1");
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::parse("fp:32003").is_ok());
        assert!(Field::parse("zz").is_err());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::prime(7).unwrap();
        let half = f
            .from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)))
            .unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
        assert!(f
            .from_rational(&BigRational::new(BigInt::from(1), BigInt::from(7)))
            .is_err());
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = &Field::Rational.one() + &Field::Prime(7).one();
    }
}
