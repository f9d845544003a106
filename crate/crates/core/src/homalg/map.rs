use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::groebner::{module_is_zero, PolyMatrix, ZeroCertificate};

/// A degree-preserving map of complexes, one matrix per degree
/// (`f^i : C^i → D^i`, zero where absent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i32, PolyMatrix>,
}

/// Per-degree outcome of a quasi-isomorphism test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeVerdict {
    pub degree: i32,
    pub acyclic: bool,
    /// Generator of the cone homology that survives, with its normal form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiIsoReport {
    pub quasi_isomorphism: bool,
    pub degrees: Vec<DegreeVerdict>,
}

impl ChainMap {
    pub fn new(source: &ChainComplex, target: &ChainComplex, components: BTreeMap<i32, PolyMatrix>) -> Result<ChainMap> {
        for (&i, m) in &components {
            if m.rows() != target.rank(i) || m.cols() != source.rank(i) {
                return Err(Error::Shape(format!(
                    "component in degree {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let components = c.degrees().map(|i| (i, PolyMatrix::identity(c.ring(), c.rank(i)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, i: i32) -> PolyMatrix {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(self.source.ring(), self.target.rank(i), self.source.rank(i)))
    }

    pub fn components(&self) -> &BTreeMap<i32, PolyMatrix> {
        &self.components
    }

    fn span(&self) -> std::ops::RangeInclusive<i32> {
        self.source.lo().min(self.target.lo())..=self.source.hi().max(self.target.hi())
    }

    /// First degree where `d_D f ≠ f d_C` (modulo target relations), or
    /// where source relations are not carried into target relations.
    pub fn chain_law_defect(&self) -> Option<i32> {
        for i in self.span() {
            let lhs = self.target.differential(i).mul(&self.component(i));
            let rhs = self.component(i + 1).mul(&self.source.differential(i));
            if !self.target.in_relations(i + 1, &lhs.sub(&rhs)) {
                return Some(i);
            }
            let rel = self.source.relations(i);
            if rel.cols() > 0 && !self.target.in_relations(i, &self.component(i).mul(&rel)) {
                return Some(i);
            }
        }
        None
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_law_defect().is_none()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.target.ranks() != other.source.ranks() || self.target.lo() != other.source.lo() {
            return Err(Error::Shape("composable maps must share the middle complex".into()));
        }
        let mut components = BTreeMap::new();
        for i in self.span() {
            components.insert(i, other.component(i).mul(&self.component(i)));
        }
        ChainMap::new(&self.source, &other.target, components)
    }

    /// `cone^i = C^{i+1} ⊕ D^i` with `d = [[−d_C, 0], [f, d_D]]`.
    pub fn cone(&self) -> ChainComplex {
        let (c, d) = (&self.source, &self.target);
        let ring = c.ring();
        let lo = (c.lo() - 1).min(d.lo());
        let hi = (c.hi() - 1).max(d.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|i| c.rank(i + 1) + d.rank(i)).collect();
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (a0, b0) = (c.rank(i + 1), d.rank(i));
            let (a1, b1) = (c.rank(i + 2), d.rank(i + 1));
            let mut m = PolyMatrix::zeros(ring, a1 + b1, a0 + b0);
            m.paste(0, 0, &c.differential(i + 1).neg());
            m.paste(a1, 0, &self.component(i + 1));
            m.paste(a1, a0, &d.differential(i));
            diffs.push(m);
        }
        let relations: Vec<PolyMatrix> = (lo..=hi)
            .map(|i| {
                let (rc, rd) = (c.relations(i + 1), d.relations(i));
                let rc = if rc.rows() == c.rank(i + 1) { rc } else { PolyMatrix::zeros(ring, c.rank(i + 1), 0) };
                let rd = if rd.rows() == d.rank(i) { rd } else { PolyMatrix::zeros(ring, d.rank(i), 0) };
                rc.block_diag(&rd)
            })
            .collect();
        ChainComplex::with_relations(ring, lo, ranks, diffs, relations).expect("cone shapes")
    }

    /// Quasi-isomorphism, decided as acyclicity of the cone.
    pub fn is_quasi_iso(&self) -> Result<QuasiIsoReport> {
        let cone = self.cone();
        let mut degrees = Vec::new();
        for i in cone.degrees() {
            let h = cone.homology(i)?;
            let cert = module_is_zero(&h.presentation)?;
            let (acyclic, witness) = match cert {
                ZeroCertificate::Zero { .. } => (true, None),
                ZeroCertificate::NonZero { generator, normal_form } => (
                    false,
                    Some(format!("class of cycle {} (normal form {normal_form})", h.cycle_basis.column(generator))),
                ),
            };
            degrees.push(DegreeVerdict { degree: i, acyclic, witness });
        }
        Ok(QuasiIsoReport { quasi_isomorphism: degrees.iter().all(|d| d.acyclic), degrees })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Field, OrderKind, PolyRing, Ring};

    fn ring(vars: &[&str]) -> Ring {
        PolyRing::new(vars, Field::Rational, OrderKind::Degrevlex).unwrap()
    }

    fn mat(r: &Ring, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::parse(r, &rows.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    fn koszul_x(r: &Ring) -> ChainComplex {
        ChainComplex::new(r, -1, vec![1, 1], vec![mat(r, &[&["x"]])])
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let r = ring(&["x"]);
        let id = ChainMap::identity(&koszul_x(&r));
        assert!(id.is_chain_map());
        let cone = id.cone();
        assert!(cone.validate().is_ok());
        assert!(id.is_quasi_iso().unwrap().quasi_isomorphism);
    }

    #[test]
    fn zero_map_to_zero_gives_shift() {
        let r = ring(&["x"]);
        let c = koszul_x(&r);
        let f = ChainMap::zero(&c, &ChainComplex::zero(&r));
        let cone = f.cone();
        let shifted = c.shift(1);
        assert_eq!(cone.lo(), shifted.lo());
        for i in shifted.degrees() {
            assert_eq!(cone.rank(i), shifted.rank(i));
            if i < shifted.hi() {
                assert_eq!(cone.differential(i), shifted.differential(i));
            }
        }
    }

    #[test]
    fn zero_self_map_is_not_quasi_iso() {
        let r = ring(&["x"]);
        let c = koszul_x(&r);
        let rep = ChainMap::zero(&c, &c).is_quasi_iso().unwrap();
        assert!(!rep.quasi_isomorphism);
        // H^0 of K(x) survives; it appears in cone degree 0
        assert!(rep.degrees.iter().any(|d| d.degree == 0 && !d.acyclic && d.witness.is_some()));
    }

    #[test]
    fn resolution_comparison() {
        // (R --x--> R) against R/(x) in degree 0: both present R/(x)
        let r = ring(&["x"]);
        let c = koszul_x(&r);
        let q = ChainComplex::with_relations(&r, 0, vec![1], vec![], vec![mat(&r, &[&["x"]])]).unwrap();
        let f = ChainMap::new(&c, &q, BTreeMap::from([(0, PolyMatrix::identity(&r, 1))])).unwrap();
        assert!(f.is_chain_map());
        assert!(f.is_quasi_iso().unwrap().quasi_isomorphism);
    }

    #[test]
    fn broken_chain_law_is_located() {
        let r = ring(&["x"]);
        let c = koszul_x(&r);
        let f = ChainMap::new(&c, &c, BTreeMap::from([(-1, PolyMatrix::identity(&r, 1))])).unwrap();
        assert_eq!(f.chain_law_defect(), Some(-1));
    }
}
