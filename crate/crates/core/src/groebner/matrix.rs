//! Free-module elements and polynomial matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{same_ring, Coeff, Field, OrderKind, PolyRing, Polynomial, Ring};

/// An element of the free module `R^m`, as a column of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleElem {
    pub(crate) ring: Ring,
    pub(crate) comps: Vec<Polynomial>,
}

impl FreeModuleElem {
    pub fn new(ring: &Ring, comps: Vec<Polynomial>) -> FreeModuleElem {
        debug_assert!(comps.iter().all(|p| same_ring(p.ring(), ring)));
        FreeModuleElem { ring: ring.clone(), comps }
    }

    pub fn zero(ring: &Ring, m: usize) -> FreeModuleElem {
        FreeModuleElem { ring: ring.clone(), comps: vec![ring.zero(); m] }
    }

    /// Standard basis vector `e_i` of `R^m`.
    pub fn basis(ring: &Ring, m: usize, i: usize) -> FreeModuleElem {
        let mut v = FreeModuleElem::zero(ring, m);
        v.comps[i] = ring.one();
        v
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn get(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn set(&mut self, i: usize, p: Polynomial) {
        self.comps[i] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &FreeModuleElem) -> FreeModuleElem {
        assert_eq!(self.len(), other.len());
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        FreeModuleElem { ring: self.ring.clone(), comps }
    }

    pub fn sub(&self, other: &FreeModuleElem) -> FreeModuleElem {
        assert_eq!(self.len(), other.len());
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect();
        FreeModuleElem { ring: self.ring.clone(), comps }
    }

    pub fn scale(&self, f: &Polynomial) -> FreeModuleElem {
        let comps = self.comps.iter().map(|a| a * f).collect();
        FreeModuleElem { ring: self.ring.clone(), comps }
    }

    pub fn neg(&self) -> FreeModuleElem {
        let comps = self.comps.iter().map(|a| -a).collect();
        FreeModuleElem { ring: self.ring.clone(), comps }
    }

    /// Concatenation `(self, other)` in `R^{m+n}`.
    pub fn concat(&self, other: &FreeModuleElem) -> FreeModuleElem {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        FreeModuleElem { ring: self.ring.clone(), comps }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> FreeModuleElem {
        FreeModuleElem { ring: self.ring.clone(), comps: self.comps[range].to_vec() }
    }

    pub fn restrict_to(&self, target: &Ring) -> Result<FreeModuleElem> {
        let comps = self.comps.iter().map(|p| p.restrict_to(target)).collect::<Result<_>>()?;
        Ok(FreeModuleElem { ring: target.clone(), comps })
    }

    pub fn embed_into(&self, target: &Ring) -> Result<FreeModuleElem> {
        let comps = self.comps.iter().map(|p| p.embed_into(target)).collect::<Result<_>>()?;
        Ok(FreeModuleElem { ring: target.clone(), comps })
    }
}

impl fmt::Display for FreeModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A matrix of polynomials, acting on column vectors: `R^cols → R^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { ring: ring.clone(), rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Polynomial>>) -> Result<PolyMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        if rows.iter().flatten().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(PolyMatrix { ring: ring.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(ring: &Ring, rows: usize, cols: &[FreeModuleElem]) -> Result<PolyMatrix> {
        let mut m = PolyMatrix::zeros(ring, rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            if v.len() != rows {
                return Err(Error::Shape(format!("column {j} has length {} (expected {rows})", v.len())));
            }
            if !same_ring(v.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            for i in 0..rows {
                m.set(i, j, v.get(i).clone());
            }
        }
        Ok(m)
    }

    /// Parses row-major polynomial strings.
    pub fn parse(ring: &Ring, rows: &[Vec<String>]) -> Result<PolyMatrix> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(ring, parsed)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        debug_assert!(same_ring(p.ring(), &self.ring));
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> FreeModuleElem {
        FreeModuleElem::new(&self.ring, (0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn columns(&self) -> Vec<FreeModuleElem> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Polynomial> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        self.try_mul(other).expect("matrix product shapes")
    }

    pub fn try_apply(&self, v: &FreeModuleElem) -> Result<FreeModuleElem> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        if !same_ring(v.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let comps = (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v.get(j).is_zero() {
                        acc = &acc + &(a * v.get(j));
                    }
                }
                acc
            })
            .collect();
        Ok(FreeModuleElem::new(&self.ring, comps))
    }

    pub fn apply(&self, v: &FreeModuleElem) -> FreeModuleElem {
        self.try_apply(v).expect("matrix-vector shapes")
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> PolyMatrix {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn scale(&self, f: &Polynomial) -> PolyMatrix {
        let entries = self.entries.iter().map(|a| a * f).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = PolyMatrix::zeros(&self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        PolyMatrix { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn block_diag(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Writes `block` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &PolyMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, self.rows, cols.len());
        for i in 0..self.rows {
            for (b, &j) in cols.iter().enumerate() {
                m.set(i, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, rows.len(), self.cols);
        for (a, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.set(a, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn map_entries<F: FnMut(&Polynomial) -> Polynomial>(&self, ring: &Ring, f: F) -> PolyMatrix {
        let entries = self.entries.iter().map(f).collect();
        PolyMatrix { ring: ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn restrict_to(&self, target: &Ring) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|p| p.restrict_to(target)).collect::<Result<_>>()?;
        Ok(PolyMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn embed_into(&self, target: &Ring) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|p| p.embed_into(target)).collect::<Result<_>>()?;
        Ok(PolyMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Kronecker product: block `(i, j)` is `self[i][j]·other`.
    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    /// Scales each column so its first nonzero entry is monic.
    pub fn normalize_columns(&self) -> PolyMatrix {
        let mut m = self.clone();
        for j in 0..self.cols {
            let lead = (0..self.rows).map(|i| self.get(i, j)).find(|p| !p.is_zero());
            if let Some(p) = lead {
                let inv = p.leading_term().expect("nonzero").1.inv().expect("nonzero");
                if !inv.is_one() {
                    for i in 0..self.rows {
                        m.set(i, j, self.get(i, j).scale(&inv));
                    }
                }
            }
        }
        m
    }

    /// Drops zero columns.
    pub fn nonzero_columns(&self) -> PolyMatrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero())).collect();
        self.select_columns(&keep)
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    /// Rank over the fraction field, by fraction-free (Bareiss) elimination.
    pub fn generic_rank(&self) -> usize {
        let mut a: Vec<Vec<Polynomial>> = (0..self.rows).map(|i| self.row(i)).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = self.ring.one();
        let mut r = 0;
        let mut done_cols = vec![false; cols];
        while r < rows {
            // pivot: cheapest nonzero entry among remaining rows/columns
            let mut best: Option<(usize, usize, (u32, usize))> = None;
            for i in r..rows {
                for j in 0..cols {
                    if done_cols[j] || a[i][j].is_zero() {
                        continue;
                    }
                    let cost = (a[i][j].total_degree().unwrap_or(0), a[i][j].terms().len());
                    if best.as_ref().is_none_or(|b| cost < b.2) {
                        best = Some((i, j, cost));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap(r, pi);
            done_cols[pj] = true;
            let pivot = a[r][pj].clone();
            for i in r + 1..rows {
                let factor = a[i][pj].clone();
                for j in 0..cols {
                    if done_cols[j] && j != pj {
                        continue;
                    }
                    let num = &(&pivot * &a[i][j]) - &(&factor * &a[r][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = pivot;
            r += 1;
        }
        r
    }
}

impl Polynomial {
    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let ring = self.ring().clone();
        let (dm, dc) = d.leading_term()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = ring.zero();
        while let Some((m, c)) = rem.leading_term() {
            let q = dm.quotient_of(m)?;
            let qc = c * &dc_inv;
            rem = &rem - &d.mul_term(&q, &qc);
            quot = &quot + &ring.monomial(q, qc);
        }
        Some(quot)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// JSON wire form: row-major polynomial strings with explicit shape and ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub ring: RingJson,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    pub vars: Vec<String>,
    pub field: String,
    pub order: String,
}

impl RingJson {
    pub fn from_ring(ring: &Ring) -> RingJson {
        RingJson { vars: ring.vars().to_vec(), field: ring.field().to_string(), order: ring.order().name().into() }
    }

    pub fn to_ring(&self) -> Result<Ring> {
        PolyRing::new(&self.vars, Field::parse(&self.field)?, OrderKind::parse(&self.order)?)
    }
}

impl PolyMatrix {
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            ring: RingJson::from_ring(&self.ring),
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).iter().map(|p| p.to_string()).collect()).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<PolyMatrix> {
        let ring = json.ring.to_ring()?;
        if json.entries.len() != json.rows || json.entries.iter().any(|r| r.len() != json.cols) {
            return Err(Error::Shape("matrix entries disagree with rows/cols".into()));
        }
        let m = PolyMatrix::parse(&ring, &json.entries)?;
        if json.rows == 0 || json.cols == 0 {
            return Ok(PolyMatrix::zeros(&ring, json.rows, json.cols));
        }
        Ok(m)
    }
}

/// Rank of a matrix over a field (dense Gaussian elimination).
pub fn field_rank(field: Field, rows: &[Vec<Coeff>]) -> usize {
    let mut a: Vec<Vec<Coeff>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for j in 0..ncols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let v = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = v;
                }
            }
        }
        r += 1;
    }
    let _ = field;
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        PolyRing::new(&["x", "y"], Field::Rational, OrderKind::Degrevlex).unwrap()
    }

    #[test]
    fn product_and_shapes() {
        let r = ring();
        let a = PolyMatrix::parse(&r, &[vec!["x".into(), "y".into()]]).unwrap();
        let b = PolyMatrix::parse(&r, &[vec!["y".into()], vec!["-x".into()]]).unwrap();
        assert!(a.mul(&b).is_zero());
        assert!(a.try_mul(&a).is_err());
    }

    #[test]
    fn bareiss_rank() {
        let r = ring();
        let m = PolyMatrix::parse(
            &r,
            &[
                vec!["x".into(), "y".into(), "x + y".into()],
                vec!["x^2".into(), "x*y".into(), "x^2 + x*y".into()],
            ],
        )
        .unwrap();
        assert_eq!(m.generic_rank(), 1);
        assert_eq!(PolyMatrix::identity(&r, 3).generic_rank(), 3);
        let k = PolyMatrix::parse(&r, &[vec!["x".into(), "y".into()], vec!["-y".into(), "x".into()]]).unwrap();
        assert_eq!(k.generic_rank(), 2);
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let p = r.parse("x^2 - y^2").unwrap();
        assert_eq!(p.div_exact(&r.parse("x - y").unwrap()), Some(r.parse("x + y").unwrap()));
        assert_eq!(p.div_exact(&r.parse("x").unwrap()), None);
    }

    #[test]
    fn json_round_trip() {
        let r = ring();
        let m = PolyMatrix::parse(&r, &[vec!["x".into(), "1/2*y - 3".into()]]).unwrap();
        let j = m.to_json();
        assert_eq!(PolyMatrix::from_json(&j).unwrap(), m);
    }
}
