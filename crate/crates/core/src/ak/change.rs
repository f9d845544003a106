use std::collections::BTreeMap;

use super::{ak_complex, function_matrix, nu_matrix, term_rank, QuantizedCycle};
use crate::error::{Error, Result};
use crate::groebner::PolyMatrix;
use crate::koszul::ExteriorBasis;
use crate::polyring::{Polynomial, Ring};

/// A differential operator `Σ_α c_α ∂^α` on a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    ring: Ring,
    terms: BTreeMap<Vec<u32>, Polynomial>,
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// All `γ ≤ α` componentwise.
fn below(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &a in alpha {
        out = out.into_iter().flat_map(|g| (0..=a).map(move |e| [g.clone(), vec![e]].concat())).collect();
    }
    out
}

impl DiffOp {
    pub fn zero(ring: &Ring) -> DiffOp {
        DiffOp { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: &Polynomial) -> DiffOp {
        let mut d = DiffOp::zero(f.ring());
        d.add_term(vec![0; f.ring().arity()], f.clone());
        d
    }

    /// `f·∂_j`.
    pub fn partial(f: &Polynomial, j: usize) -> DiffOp {
        let mut alpha = vec![0; f.ring().arity()];
        alpha[j] = 1;
        let mut d = DiffOp::zero(f.ring());
        d.add_term(alpha, f.clone());
        d
    }

    fn add_term(&mut self, alpha: Vec<u32>, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&alpha) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Polynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut d = self.clone();
        for (a, c) in &other.terms {
            d.add_term(a.clone(), c.clone());
        }
        d
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp { ring: self.ring.clone(), terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    /// `self ∘ other`, by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let field = self.ring.field();
        let mut out = DiffOp::zero(&self.ring);
        for (alpha, ca) in &self.terms {
            for gamma in below(alpha) {
                let mult: i64 = alpha.iter().zip(&gamma).map(|(&a, &g)| binom(a, g)).product();
                let rest: Vec<u32> = alpha.iter().zip(&gamma).map(|(a, g)| a - g).collect();
                for (beta, cb) in &other.terms {
                    let dcb = cb.derivative_multi(&gamma);
                    if dcb.is_zero() {
                        continue;
                    }
                    let order: Vec<u32> = rest.iter().zip(beta).map(|(a, b)| a + b).collect();
                    out.add_term(order, (ca * &dcb).scale(&field.from_i64(mult)));
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.terms.iter().fold(self.ring.zero(), |acc, (a, c)| &acc + &(c * &f.derivative_multi(a)))
    }
}

/// Matrix of differential operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOpMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<DiffOp>,
}

impl DiffOpMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> DiffOpMatrix {
        DiffOpMatrix { ring: ring.clone(), rows, cols, entries: vec![DiffOp::zero(ring); rows * cols] }
    }

    pub fn from_poly(m: &PolyMatrix) -> DiffOpMatrix {
        let mut d = DiffOpMatrix::zeros(m.ring(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                d.entries[i * m.cols() + j] = DiffOp::multiplication(m.get(i, j));
            }
        }
        d
    }

    pub fn identity(ring: &Ring, n: usize) -> DiffOpMatrix {
        DiffOpMatrix::from_poly(&PolyMatrix::identity(ring, n))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &DiffOp {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, d: DiffOp) {
        self.entries[i * self.cols + j] = d;
    }

    pub fn order(&self) -> u32 {
        self.entries.iter().map(|e| e.order()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &DiffOpMatrix) -> DiffOpMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        DiffOpMatrix { entries, ..self.clone() }
    }

    pub fn compose(&self, other: &DiffOpMatrix) -> Result<DiffOpMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} after {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = DiffOpMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = DiffOp::zero(&self.ring);
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.compose(other.get(l, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(self.ring.zero(), |acc, j| &acc + &self.get(i, j).apply(&v[j])))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == DiffOpMatrix::identity(&self.ring, self.rows)
    }
}

/// The isomorphism `P_σ → P_{σ+φ}`, `(i, j) ↦ (i + Σ_S φ(dg_S) ∧ e_S, j)`
/// for `j = Σ_S g_S e_S`, with its checks.
#[derive(Clone, Debug)]
pub struct QuantizationChange {
    pub source: QuantizedCycle,
    pub target: QuantizedCycle,
    pub components: BTreeMap<i32, DiffOpMatrix>,
    /// `d ∘ C = C ∘ d` in every degree.
    pub is_chain_map: bool,
    /// The maps built from `φ` and `−φ` compose to the identity both ways.
    pub inverse_is_identity: bool,
    /// `C` carries the `σ`-action to the `(σ+φ)`-action.
    pub intertwines_actions: bool,
}

impl QuantizationChange {
    pub fn holds(&self) -> bool {
        self.is_chain_map && self.inverse_is_identity && self.intertwines_actions
    }
}

fn change_component(ring: &Ring, basis: &ExteriorBasis, phi: &PolyMatrix, k: usize) -> DiffOpMatrix {
    let n = term_rank(basis, k);
    let top = basis.dim(k + 1);
    let mut m = DiffOpMatrix::identity(ring, n);
    for (col, s) in basis.subsets(k).iter().enumerate() {
        for a in 0..basis.rank() {
            if let Some((sign, t)) = ExteriorBasis::wedge(&[a], s) {
                let row = basis.index_of(&t).expect("subset");
                let mut op = DiffOp::zero(ring);
                for j in 0..ring.arity() {
                    op = op.add(&DiffOp::partial(phi.get(a, j), j));
                }
                let op = if sign > 0 { op } else { op.neg() };
                let entry = m.get(row, top + col).add(&op);
                m.set(row, top + col, entry);
            }
        }
    }
    m
}

pub fn change_quantization_iso(qc: &QuantizedCycle, phi: &PolyMatrix) -> Result<QuantizationChange> {
    let target = qc.shifted(phi)?;
    let ring = qc.ring();
    let phi = phi.embed_into(&ring)?;
    let source_ak = ak_complex(qc)?;
    let basis = source_ak.basis.clone();
    let c = qc.codim();
    let forward: Vec<DiffOpMatrix> = (0..=c).map(|k| change_component(&ring, &basis, &phi, k)).collect();
    let backward: Vec<DiffOpMatrix> = (0..=c).map(|k| change_component(&ring, &basis, &phi.neg(), k)).collect();

    let mut is_chain_map = true;
    for k in 1..=c {
        let d = DiffOpMatrix::from_poly(&source_ak.complex.differential(-(k as i32)));
        is_chain_map &= d.compose(&forward[k])? == forward[k - 1].compose(&d)?;
    }
    let mut inverse_is_identity = true;
    for k in 0..=c {
        inverse_is_identity &= backward[k].compose(&forward[k])?.is_identity();
        inverse_is_identity &= forward[k].compose(&backward[k])?.is_identity();
    }
    let mut intertwines_actions = true;
    for k in 0..=c {
        for j in 0..ring.arity() {
            let f = ring.variable(j);
            let src = DiffOpMatrix::from_poly(&function_matrix(qc, &basis, k, &f));
            let tgt = DiffOpMatrix::from_poly(&function_matrix(&target, &basis, k, &f));
            intertwines_actions &= forward[k].compose(&src)? == tgt.compose(&forward[k])?;
        }
        for a in 0..c {
            let nu = DiffOpMatrix::from_poly(&nu_matrix(&ring, &basis, k, a));
            intertwines_actions &= forward[k].compose(&nu)? == nu.compose(&forward[k])?;
        }
    }
    let components = forward.into_iter().enumerate().map(|(k, m)| (-(k as i32), m)).collect();
    Ok(QuantizationChange { source: qc.clone(), target, components, is_chain_map, inverse_is_identity, intertwines_actions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ak::random_phi;
    use crate::cycles::adapt_coordinates;
    use crate::polyring::{Field, OrderKind, PolyRing};

    #[test]
    fn leibniz() {
        let r = PolyRing::new(&["u", "v"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let du = DiffOp::partial(&r.one(), 0);
        let u = DiffOp::multiplication(&r.variable(0));
        // ∂_u ∘ u = u ∂_u + 1
        let lhs = du.compose(&u);
        let rhs = DiffOp::partial(&r.variable(0), 0).add(&DiffOp::multiplication(&r.one()));
        assert_eq!(lhs, rhs);
        let f = r.parse("u^3*v + v^2").unwrap();
        assert_eq!(lhs.apply(&f), r.parse("4*u^3*v + v^2").unwrap());
        // composition agrees with iterated application
        let d2 = DiffOp::partial(&r.parse("v").unwrap(), 0).compose(&DiffOp::partial(&r.parse("u*v").unwrap(), 1));
        assert_eq!(d2.apply(&f), DiffOp::partial(&r.parse("v").unwrap(), 0).apply(&DiffOp::partial(&r.parse("u*v").unwrap(), 1).apply(&f)));
        assert_eq!(d2.order(), 2);
    }

    #[test]
    fn zero_offset_gives_identity() {
        let p = adapt_coordinates(&[vec![1, 0, 0], vec![0, 1, 0]], &[vec![1, 0, 0], vec![0, 1, 0]], 3, Field::Rational).unwrap();
        let qc = QuantizedCycle::canonical(&p);
        let ch = change_quantization_iso(&qc, &PolyMatrix::zeros(&qc.ring(), 2, 1)).unwrap();
        assert!(ch.holds());
        assert!(ch.components.values().all(|m| m.is_identity()));
    }

    #[test]
    fn codim_one_is_unipotent() {
        let p = adapt_coordinates(&[vec![1, 0]], &[vec![0, 1]], 2, Field::Rational).unwrap();
        let qc = QuantizedCycle::canonical(&p);
        let rx = qc.ring();
        let phi = PolyMatrix::parse(&rx, &[vec!["3*y1".into()]]).unwrap();
        let ch = change_quantization_iso(&qc, &phi).unwrap();
        assert!(ch.holds());
        let c0 = &ch.components[&0];
        assert!(c0.get(0, 0).order() == 0 && c0.get(1, 1).order() == 0 && c0.get(1, 0).is_zero());
        assert_eq!(*c0.get(0, 1), DiffOp::partial(&rx.parse("3*y1").unwrap(), 0));
    }

    #[test]
    fn random_offsets_invert() {
        let p = adapt_coordinates(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0]], &[vec![0, 1, 0, 0], vec![0, 0, 1, 0]], 4, Field::Rational)
            .unwrap();
        for seed in 0..3 {
            let qc = QuantizedCycle::with_phi(&p, random_phi(&p, seed)).unwrap();
            let ch = change_quantization_iso(&qc, &random_phi(&p, seed + 10)).unwrap();
            assert!(ch.holds());
        }
    }
}
