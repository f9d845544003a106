use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{
    present_subquotient, syzygies, FreeModuleElem, ImageBasis, MatrixJson, ModulePresentation, PolyMatrix, RingJson,
};
use crate::polyring::{same_ring, Ring};

/// A bounded cochain complex `C^lo → … → C^hi`. Each term is a free module
/// modulo a relation matrix (no columns for a free term).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    lo: i32,
    ranks: Vec<usize>,
    diffs: Vec<PolyMatrix>,
    relations: Vec<PolyMatrix>,
}

/// Outcome of [`ChainComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Validation {
    Ok,
    Shape { degree: i32, detail: String },
    NotAComplex { degree: i32 },
    RelationsNotPreserved { degree: i32 },
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

/// `H^degree` with the cycles representing its generators.
#[derive(Clone, Debug)]
pub struct HomologyModule {
    pub degree: i32,
    pub presentation: ModulePresentation,
    pub cycle_basis: PolyMatrix,
}

impl HomologyModule {
    /// Drops generators killed by unit relations.
    pub fn minimized(&self) -> HomologyModule {
        let m = self.presentation.minimize();
        HomologyModule {
            degree: self.degree,
            cycle_basis: self.cycle_basis.select_columns(&m.kept),
            presentation: m.presentation,
        }
    }
}

impl ChainComplex {
    /// Free complex; `diffs[k]` is `d^{lo+k}`. Shapes are checked by
    /// [`validate`](Self::validate), not here.
    pub fn new(ring: &Ring, lo: i32, ranks: Vec<usize>, diffs: Vec<PolyMatrix>) -> ChainComplex {
        let relations = ranks.iter().map(|&r| PolyMatrix::zeros(ring, r, 0)).collect();
        ChainComplex { ring: ring.clone(), lo, ranks, diffs, relations }
    }

    /// Complex whose term in degree `i` is `R^{rank} / relations[i - lo]`.
    pub fn with_relations(
        ring: &Ring,
        lo: i32,
        ranks: Vec<usize>,
        diffs: Vec<PolyMatrix>,
        relations: Vec<PolyMatrix>,
    ) -> Result<ChainComplex> {
        if relations.len() != ranks.len() {
            return Err(Error::Shape("one relation matrix per degree".into()));
        }
        for (k, (rel, &r)) in relations.iter().zip(&ranks).enumerate() {
            if rel.rows() != r {
                return Err(Error::Shape(format!("relations in degree {} have {} rows", lo + k as i32, rel.rows())));
            }
        }
        Ok(ChainComplex { ring: ring.clone(), lo, ranks, diffs, relations })
    }

    /// The zero complex in degree 0.
    pub fn zero(ring: &Ring) -> ChainComplex {
        ChainComplex::new(ring, 0, vec![0], vec![])
    }

    /// `R^rank` in degree `degree`.
    pub fn concentrated(ring: &Ring, degree: i32, rank: usize) -> ChainComplex {
        ChainComplex::new(ring, degree, vec![rank], vec![])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    fn idx(&self, i: i32) -> Option<usize> {
        if i < self.lo || i > self.hi() {
            None
        } else {
            Some((i - self.lo) as usize)
        }
    }

    /// Rank of the free module in degree `i` (zero outside the range).
    pub fn rank(&self, i: i32) -> usize {
        self.idx(i).map_or(0, |k| self.ranks[k])
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d^i : C^i → C^{i+1}`; zero outside the stored range.
    pub fn differential(&self, i: i32) -> PolyMatrix {
        match self.idx(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => PolyMatrix::zeros(&self.ring, self.rank(i + 1), self.rank(i)),
        }
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.diffs
    }

    /// Relation matrix of the term in degree `i`.
    pub fn relations(&self, i: i32) -> PolyMatrix {
        match self.idx(i) {
            Some(k) => self.relations[k].clone(),
            None => PolyMatrix::zeros(&self.ring, 0, 0),
        }
    }

    pub fn is_free(&self) -> bool {
        self.relations.iter().all(|r| r.cols() == 0)
    }

    pub fn term(&self, i: i32) -> ModulePresentation {
        ModulePresentation::new(self.rank(i), self.relations(i)).expect("rows match rank")
    }

    /// Shapes, `d² = 0` and (for presented terms) `d(relations) ⊆ relations`.
    pub fn validate(&self) -> Validation {
        if self.diffs.len() + 1 != self.ranks.len() && !(self.ranks.is_empty() && self.diffs.is_empty()) {
            return Validation::Shape {
                degree: self.lo,
                detail: format!("{} differentials for {} terms", self.diffs.len(), self.ranks.len()),
            };
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let i = self.lo + k as i32;
            if !same_ring(d.ring(), &self.ring) {
                return Validation::Shape { degree: i, detail: "differential over another ring".into() };
            }
            if d.cols() != self.ranks[k] || d.rows() != self.ranks[k + 1] {
                return Validation::Shape {
                    degree: i,
                    detail: format!("d^{i} is {}x{}, expected {}x{}", d.rows(), d.cols(), self.ranks[k + 1], self.ranks[k]),
                };
            }
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let i = self.lo + k as i32;
            let dd = self.diffs[k + 1].mul(&self.diffs[k]);
            if !self.in_relations(i + 2, &dd) {
                return Validation::NotAComplex { degree: i };
            }
        }
        if !self.is_free() {
            for (k, d) in self.diffs.iter().enumerate() {
                let i = self.lo + k as i32;
                if !self.in_relations(i + 1, &d.mul(&self.relations[k])) {
                    return Validation::RelationsNotPreserved { degree: i };
                }
            }
        }
        Validation::Ok
    }

    /// True when every column of `m` lies in the relation module of degree `i`.
    pub fn in_relations(&self, i: i32, m: &PolyMatrix) -> bool {
        if m.is_zero() {
            return true;
        }
        let rel = self.relations(i);
        if rel.cols() == 0 {
            return false;
        }
        let image = ImageBasis::new(&rel).expect("relation basis");
        m.columns().iter().all(|c| image.contains(c).expect("shapes"))
    }

    /// Cycles in degree `i`, as columns.
    pub fn cycles(&self, i: i32) -> Result<PolyMatrix> {
        let d = self.differential(i);
        let rel = self.relations(i + 1);
        if rel.cols() == 0 {
            return syzygies(&d);
        }
        let syz = syzygies(&d.hstack(&rel))?;
        Ok(syz.submatrix(0..self.rank(i), 0..syz.cols()).nonzero_columns())
    }

    /// Boundaries plus relations in degree `i`, as columns.
    pub fn boundaries(&self, i: i32) -> PolyMatrix {
        self.differential(i - 1).hstack(&self.relations(i)).nonzero_columns()
    }

    pub fn homology(&self, i: i32) -> Result<HomologyModule> {
        if i < self.lo || i > self.hi() {
            return Err(Error::DegreeOutOfRange { degree: i, lo: self.lo, hi: self.hi() });
        }
        let z = self.cycles(i)?;
        let b = self.boundaries(i);
        let presentation = present_subquotient(&z, &b)?;
        Ok(HomologyModule { degree: i, presentation, cycle_basis: z })
    }

    /// Homology in every degree, from `lo` up.
    pub fn all_homology(&self) -> Result<Vec<HomologyModule>> {
        self.degrees().map(|i| self.homology(i)).collect()
    }

    /// `(Σ (−1)^i rank C^i, Σ (−1)^i generic rank H^i)`, ranks taken over the
    /// fraction field.
    pub fn euler_characteristics(&self) -> Result<(i64, i64)> {
        let sign = |i: i32| if i.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let mut terms = 0i64;
        let mut homology = 0i64;
        for i in self.degrees() {
            terms += sign(i) * self.term(i).generic_rank() as i64;
            homology += sign(i) * self.homology(i)?.presentation.generic_rank() as i64;
        }
        Ok((terms, homology))
    }

    /// `C[k]^i = C^{i+k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i32) -> ChainComplex {
        let diffs = if k.rem_euclid(2) == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.neg()).collect() };
        ChainComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            ranks: self.ranks.clone(),
            diffs,
            relations: self.relations.clone(),
        }
    }

    /// Applies a ring map entrywise to every matrix.
    pub fn map_ring<F: FnMut(&PolyMatrix) -> Result<PolyMatrix>>(&self, target: &Ring, mut f: F) -> Result<ChainComplex> {
        Ok(ChainComplex {
            ring: target.clone(),
            lo: self.lo,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(&mut f).collect::<Result<_>>()?,
            relations: self.relations.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }

    /// Replaces the relation matrices.
    pub fn with_term_relations(&self, relations: Vec<PolyMatrix>) -> Result<ChainComplex> {
        ChainComplex::with_relations(&self.ring, self.lo, self.ranks.clone(), self.diffs.clone(), relations)
    }

    /// A cycle in degree `i` is a boundary (modulo relations).
    pub fn is_boundary(&self, i: i32, v: &FreeModuleElem) -> Result<bool> {
        let b = self.boundaries(i);
        if b.cols() == 0 {
            return Ok(v.is_zero());
        }
        ImageBasis::new(&b)?.contains(v)
    }

    pub fn to_json(&self) -> ComplexJson {
        let mut differentials = BTreeMap::new();
        for (k, d) in self.diffs.iter().enumerate() {
            differentials.insert(format!("d({})", self.lo + k as i32), d.to_json());
        }
        let mut relations = BTreeMap::new();
        if !self.is_free() {
            for (k, r) in self.relations.iter().enumerate() {
                relations.insert(format!("rel({})", self.lo + k as i32), r.to_json());
            }
        }
        ComplexJson { ring: RingJson::from_ring(&self.ring), lo: self.lo, hi: self.hi(), ranks: self.ranks.clone(), differentials, relations }
    }

    pub fn from_json(json: &ComplexJson) -> Result<ChainComplex> {
        let ring = json.ring.to_ring()?;
        if json.hi - json.lo + 1 != json.ranks.len() as i32 {
            return Err(Error::Shape("degree range disagrees with ranks".into()));
        }
        let mut diffs = Vec::new();
        for i in json.lo..json.hi {
            let m = json
                .differentials
                .get(&format!("d({i})"))
                .ok_or_else(|| Error::Parse(format!("missing differential d({i})")))?;
            diffs.push(PolyMatrix::from_json(m)?.restrict_to(&ring)?);
        }
        let mut rels = Vec::new();
        for (k, i) in (json.lo..=json.hi).enumerate() {
            rels.push(match json.relations.get(&format!("rel({i})")) {
                Some(m) => PolyMatrix::from_json(m)?.restrict_to(&ring)?,
                None => PolyMatrix::zeros(&ring, json.ranks[k], 0),
            });
        }
        ChainComplex::with_relations(&ring, json.lo, json.ranks.clone(), diffs, rels)
    }
}

/// Wire form; differentials are named `d(i)` by source degree, e.g. `d(-1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub ring: RingJson,
    pub lo: i32,
    pub hi: i32,
    pub ranks: Vec<usize>,
    pub differentials: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relations: BTreeMap<String, MatrixJson>,
}
