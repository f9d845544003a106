use std::collections::HashMap;

use crate::groebner::{FreeModuleElem, PolyMatrix};
use crate::polyring::{Polynomial, Ring};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Bases of the exterior powers of a free module of rank `n`: degree `k`
/// basis vectors are the sorted `k`-subsets of `0..n`, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorBasis {
    labels: Vec<String>,
    subsets: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, usize>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

impl ExteriorBasis {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> ExteriorBasis {
        let n = labels.len();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| combinations(n, k)).collect();
        let mut index = HashMap::new();
        for level in &subsets {
            for (i, s) in level.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        ExteriorBasis { labels: labels.iter().map(|l| l.as_ref().to_string()).collect(), subsets, index }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `C(n, k)`; zero outside `0..=n`.
    pub fn dim(&self, k: usize) -> usize {
        self.subsets.get(k).map_or(0, |l| l.len())
    }

    pub fn subsets(&self, k: usize) -> &[Vec<usize>] {
        self.subsets.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        self.index.get(subset).copied()
    }

    pub fn label(&self, subset: &[usize]) -> String {
        if subset.is_empty() {
            return "1".into();
        }
        subset.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join("^")
    }

    /// `e_a ∧ e_b = sign · e_{a∪b}`, or `None` when they share an index.
    pub fn wedge(a: &[usize], b: &[usize]) -> Option<(i64, Vec<usize>)> {
        let mut inversions = 0usize;
        for &i in a {
            for &j in b {
                if i == j {
                    return None;
                }
                if i > j {
                    inversions += 1;
                }
            }
        }
        let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
        u.sort_unstable();
        Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, u))
    }

    /// Product of `v ∈ Λ^k` and `w ∈ Λ^l`, in `Λ^{k+l}`.
    pub fn wedge_vectors(&self, ring: &Ring, k: usize, v: &FreeModuleElem, l: usize, w: &FreeModuleElem) -> FreeModuleElem {
        let mut out = vec![ring.zero(); self.dim(k + l)];
        for (i, a) in self.subsets(k).iter().enumerate() {
            let va = v.get(i);
            if va.is_zero() {
                continue;
            }
            for (j, b) in self.subsets(l).iter().enumerate() {
                let wb = w.get(j);
                if wb.is_zero() {
                    continue;
                }
                if let Some((sign, u)) = Self::wedge(a, b) {
                    let idx = self.index_of(&u).expect("subset");
                    let prod = va * wb;
                    out[idx] = if sign > 0 { &out[idx] + &prod } else { &out[idx] - &prod };
                }
            }
        }
        FreeModuleElem::new(ring, out)
    }

    /// Left multiplication by `v ∈ Λ^1` as a matrix `Λ^k → Λ^{k+1}`.
    pub fn left_mult_matrix(&self, ring: &Ring, v: &[Polynomial], k: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, self.dim(k + 1), self.dim(k));
        for (j, s) in self.subsets(k).iter().enumerate() {
            for (a, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if let Some((sign, u)) = Self::wedge(&[a], s) {
                    let i = self.index_of(&u).expect("subset");
                    let entry = if sign > 0 { m.get(i, j) + c } else { m.get(i, j) - c };
                    m.set(i, j, entry);
                }
            }
        }
        m
    }

    /// Koszul contraction `Λ^k → Λ^{k−1}`, `e_S ↦ Σ (−1)^pos seq_{S[pos]} e_{S∖S[pos]}`.
    pub fn contraction_matrix(&self, ring: &Ring, seq: &[Polynomial], k: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, self.dim(k - 1), self.dim(k));
        for (j, s) in self.subsets(k).iter().enumerate() {
            for (pos, &a) in s.iter().enumerate() {
                if seq[a].is_zero() {
                    continue;
                }
                let mut rest = s.clone();
                rest.remove(pos);
                let i = self.index_of(&rest).expect("subset");
                let entry = if pos % 2 == 0 { m.get(i, j) + &seq[a] } else { m.get(i, j) - &seq[a] };
                m.set(i, j, entry);
            }
        }
        m
    }

    /// `Λ^k` of a matrix `M : R^n → R^m` (minors), rows and columns in
    /// subset order; `target` supplies the row subsets.
    pub fn exterior_power(ring: &Ring, m: &PolyMatrix, k: usize, source: &ExteriorBasis, target: &ExteriorBasis) -> PolyMatrix {
        let rows = target.subsets(k);
        let cols = source.subsets(k);
        let mut out = PolyMatrix::zeros(ring, rows.len(), cols.len());
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                out.set(i, j, determinant(ring, &m.select_rows(r).select_columns(c)));
            }
        }
        out
    }
}

/// Laplace expansion; only used on small minors.
pub fn determinant(ring: &Ring, m: &PolyMatrix) -> Polynomial {
    let n = m.rows();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let a = m.get(0, j);
        if a.is_zero() {
            continue;
        }
        let others: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = m.select_rows(&(1..n).collect::<Vec<_>>()).select_columns(&others);
        let term = a * &determinant(ring, &minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Field, OrderKind, PolyRing};

    #[test]
    fn dimensions_are_binomial() {
        let b = ExteriorBasis::new(&["a", "b", "c", "d"]);
        for k in 0..=4 {
            assert_eq!(b.dim(k), binomial(4, k));
        }
        assert_eq!(b.dim(5), 0);
        assert_eq!(b.subsets(2)[0], vec![0, 1]);
        assert_eq!(b.label(&[1, 3]), "b^d");
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(ExteriorBasis::wedge(&[1], &[0]), Some((-1, vec![0, 1])));
        assert_eq!(ExteriorBasis::wedge(&[0, 2], &[1]), Some((-1, vec![0, 1, 2])));
        assert_eq!(ExteriorBasis::wedge(&[0], &[1, 2]), Some((1, vec![0, 1, 2])));
        assert_eq!(ExteriorBasis::wedge(&[1], &[1]), None);
    }

    #[test]
    fn contraction_squares_to_zero() {
        let r = PolyRing::new(&["x", "y", "z"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let b = ExteriorBasis::new(&["e1", "e2", "e3"]);
        let seq: Vec<Polynomial> = (0..3).map(|i| r.variable(i)).collect();
        for k in 2..=3 {
            let d = b.contraction_matrix(&r, &seq, k - 1).mul(&b.contraction_matrix(&r, &seq, k));
            assert!(d.is_zero());
        }
    }

    #[test]
    fn exterior_power_of_identity_and_determinant() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let b = ExteriorBasis::new(&["e1", "e2"]);
        let m = PolyMatrix::parse(&r, &[vec!["1".into(), "x".into()], vec!["2".into(), "3".into()]]).unwrap();
        let top = ExteriorBasis::exterior_power(&r, &m, 2, &b, &b);
        assert_eq!(top.get(0, 0), &r.parse("3 - 2*x").unwrap());
        let id = ExteriorBasis::exterior_power(&r, &PolyMatrix::identity(&r, 2), 1, &b, &b);
        assert_eq!(id, PolyMatrix::identity(&r, 2));
    }
}
