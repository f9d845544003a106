use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::coeff::{Coeff, Field};
use super::monomial::{Monomial, OrderKind};
use crate::error::{Error, Result};

/// A polynomial ring `field[vars]` with a default monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    field: Field,
    order: OrderKind,
}

/// Shared handle; every polynomial points at its ring.
pub type Ring = Arc<PolyRing>;

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S], field: Field, order: OrderKind) -> Result<Ring> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(Error::Parse(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Parse(format!("duplicate variable name `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing { vars, field, order }))
    }

    /// `field[v1..vn]` with names `prefix1..prefixn`.
    pub fn numbered(prefix: &str, n: usize, field: Field, order: OrderKind) -> Ring {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        PolyRing::new(&names, field, order).expect("generated names are valid")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> OrderKind {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: OrderKind) -> Ring {
        Arc::new(PolyRing { vars: self.vars.clone(), field: self.field, order })
    }

    /// The ring on the named subset of variables (same field and order).
    pub fn subring<S: AsRef<str>>(&self, names: &[S]) -> Result<Ring> {
        for n in names {
            if self.var_index(n.as_ref()).is_none() {
                return Err(Error::Parse(format!("unknown variable `{}`", n.as_ref())));
            }
        }
        PolyRing::new(names, self.field, self.order)
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        self.constant(self.field.one())
    }

    pub fn from_i64(self: &Arc<Self>, c: i64) -> Polynomial {
        self.constant(self.field.from_i64(c))
    }

    pub fn constant(self: &Arc<Self>, c: Coeff) -> Polynomial {
        Polynomial::from_terms(self, vec![(Monomial::one(self.arity()), c)])
    }

    pub fn variable(self: &Arc<Self>, i: usize) -> Polynomial {
        Polynomial::from_terms(self, vec![(Monomial::variable(self.arity(), i), self.field.one())])
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<Polynomial> {
        let i = self
            .var_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        Ok(self.variable(i))
    }

    pub fn monomial(self: &Arc<Self>, m: Monomial, c: Coeff) -> Polynomial {
        Polynomial::from_terms(self, vec![(m, c)])
    }

    /// Linear form `Σ coeffs[i]·var_i`.
    pub fn linear_form(self: &Arc<Self>, coeffs: &[Coeff]) -> Polynomial {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::variable(self.arity(), i), c.clone()))
            .collect();
        Polynomial::from_terms(self, terms)
    }

    pub fn parse(self: &Arc<Self>, s: &str) -> Result<Polynomial> {
        super::parse::parse_polynomial(self, s)
    }
}

/// A polynomial in canonical form: terms sorted strictly descending in the
/// ring's order, no zero coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    /// Canonicalizes an arbitrary term list.
    pub fn from_terms(ring: &Ring, mut terms: Vec<(Monomial, Coeff)>) -> Polynomial {
        let order = ring.order;
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.arity(), ring.arity());
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant coefficient (zero if absent).
    pub fn constant_term(&self) -> Coeff {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Nonzero constant, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(n, _)| n.degree() == m.degree()),
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = self.ring.zero();
        for (m, c) in &small.terms {
            acc = acc.merge(&big.mul_term(m, c), false);
        }
        acc
    }

    /// Multiplication by `c·m`; the order is multiplicative so sortedness survives.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(n, d)| (n.clone(), d * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = self.ring.one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let field = self.ring.field;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::from_exponents(&e), c * &field.from_i64(k as i64))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Iterated derivative `∂^alpha`.
    pub fn derivative_multi(&self, alpha: &[u32]) -> Polynomial {
        let mut p = self.clone();
        for (v, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                p = p.derivative(v);
            }
        }
        p
    }

    /// Ring homomorphism into `target`, matching variables by name; every
    /// variable missing from `target` is set to zero.
    pub fn restrict_to(&self, target: &Ring) -> Result<Polynomial> {
        if self.ring.field != target.field {
            return Err(Error::RingMismatch);
        }
        let map: Vec<Option<usize>> = self.ring.vars.iter().map(|v| target.var_index(v)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        'term: for (m, c) in &self.terms {
            let mut e = vec![0u32; target.arity()];
            for (i, &k) in m.exponents().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => continue 'term,
                }
            }
            terms.push((Monomial::from_exponents(&e), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Inclusion into a ring containing every variable that actually occurs.
    pub fn embed_into(&self, target: &Ring) -> Result<Polynomial> {
        for (m, _) in &self.terms {
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 && target.var_index(&self.ring.vars[i]).is_none() {
                    return Err(Error::RingMismatch);
                }
            }
        }
        self.restrict_to(target)
    }

    /// Substitutes `images[i]` for variable `i`; all images share one ring.
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.arity());
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    t = &t * &images[i].pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn evaluate(&self, point: &[Coeff]) -> Coeff {
        let field = self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.exponents().iter().enumerate() {
                for _ in 0..k {
                    t = &t * &point[i];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Makes the leading coefficient one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Monomial, Coeff)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Appends a term smaller than every stored term.
    pub(crate) fn push_smallest(&mut self, m: Monomial, c: Coeff) {
        debug_assert!(self.terms.last().is_none_or(|(l, _)| self.ring.order.compare(l, &m) == Ordering::Greater));
        self.terms.push((m, c));
    }

    /// True when no variable from `vars` occurs.
    pub fn avoids(&self, vars: &[usize]) -> bool {
        self.terms.iter().all(|(m, _)| vars.iter().all(|&v| m.exponents()[v] == 0))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials from different rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials from different rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials from different rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.ring.vars[i].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[i], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::coeff::DEFAULT_PRIME;

    fn qq(vars: &[&str]) -> Ring {
        PolyRing::new(vars, Field::Rational, OrderKind::Degrevlex).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = qq(&["x"]);
        let x = r.var("x").unwrap();
        let one = r.one();
        assert_eq!(&(&x + &one) * &(&x - &one), r.parse("x^2 - 1").unwrap());
    }

    #[test]
    fn zero_absorbs() {
        let r = qq(&["x", "y"]);
        let p = r.parse("x*y + 3").unwrap();
        assert!((&p * &r.zero()).is_zero());
    }

    #[test]
    fn binomial_square() {
        let r = qq(&["x", "y"]);
        let s = r.parse("x + y").unwrap();
        // distributivity: (x+y)(x+y) = x^2 + xy + yx + y^2
        assert_eq!((&s * &s).to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let a = qq(&["x"]);
        let b = qq(&["y"]);
        assert!(matches!(a.one().try_mul(&b.one()), Err(Error::RingMismatch)));
        let c = PolyRing::new(&["x"], Field::Prime(DEFAULT_PRIME), OrderKind::Degrevlex).unwrap();
        assert!(matches!(a.one().try_add(&c.one()), Err(Error::RingMismatch)));
    }

    #[test]
    fn duplicate_variables_rejected() {
        assert!(PolyRing::new(&["x", "x"], Field::Rational, OrderKind::Lex).is_err());
    }

    #[test]
    fn derivative_and_restriction() {
        let r = qq(&["x", "y", "t"]);
        let f = r.parse("x^2*y + 3*t*y - y").unwrap();
        assert_eq!(f.derivative(0), r.parse("2*x*y").unwrap());
        let s = r.subring(&["y"]).unwrap();
        assert_eq!(f.restrict_to(&s).unwrap(), s.parse("-y").unwrap());
        assert!(f.embed_into(&s).is_err());
    }

    #[test]
    fn leading_term_is_first() {
        let r = qq(&["x", "y"]);
        let f = r.parse("y^3 + x*y + x^2*y").unwrap();
        assert_eq!(f.leading_term().unwrap().0.exponents(), &[2, 1]);
    }
}
