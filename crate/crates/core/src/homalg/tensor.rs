use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::groebner::PolyMatrix;
use crate::polyring::same_ring;

/// Index bookkeeping for `(C⊗D)^n = ⊕_{i+j=n} C^i ⊗ D^j`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub lo: i32,
    pub hi: i32,
    /// For each total degree, the `(i, j, offset)` blocks in order of `i`.
    pub blocks: Vec<Vec<(i32, i32, usize)>>,
}

impl TensorLayout {
    pub fn new(c: &ChainComplex, d: &ChainComplex) -> TensorLayout {
        let lo = c.lo() + d.lo();
        let hi = c.hi() + d.hi();
        let blocks = (lo..=hi)
            .map(|n| {
                let mut off = 0;
                let mut v = Vec::new();
                for i in c.degrees() {
                    let j = n - i;
                    if j < d.lo() || j > d.hi() {
                        continue;
                    }
                    v.push((i, j, off));
                    off += c.rank(i) * d.rank(j);
                }
                v
            })
            .collect();
        TensorLayout { lo, hi, blocks }
    }

    /// Offset of the block `C^i ⊗ D^j` in total degree `i + j`.
    pub fn offset(&self, i: i32, j: i32) -> Option<usize> {
        let n = i + j;
        if n < self.lo || n > self.hi {
            return None;
        }
        self.blocks[(n - self.lo) as usize].iter().find(|b| b.0 == i && b.1 == j).map(|b| b.2)
    }

    /// Index of `e_a ⊗ f_b` in total degree `i + j`.
    pub fn index(&self, d: &ChainComplex, i: i32, a: usize, j: i32, b: usize) -> Option<usize> {
        self.offset(i, j).map(|o| o + a * d.rank(j) + b)
    }
}

/// Total complex of `C ⊗ D` with `d(a⊗b) = da⊗b + (−1)^i a⊗db`.
pub fn tensor_complexes(c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex> {
    if !same_ring(c.ring(), d.ring()) {
        return Err(Error::RingMismatch);
    }
    if !c.is_free() || !d.is_free() {
        return Err(Error::Shape("tensor products are taken of free complexes".into()));
    }
    let ring = c.ring();
    let lay = TensorLayout::new(c, d);
    let rank = |n: i32| -> usize {
        lay.blocks[(n - lay.lo) as usize].iter().map(|&(i, j, _)| c.rank(i) * d.rank(j)).sum()
    };
    let ranks: Vec<usize> = (lay.lo..=lay.hi).map(rank).collect();
    let mut diffs = Vec::new();
    for n in lay.lo..lay.hi {
        let mut m = PolyMatrix::zeros(ring, rank(n + 1), rank(n));
        for &(i, j, off) in &lay.blocks[(n - lay.lo) as usize] {
            if let Some(t) = lay.offset(i + 1, j) {
                let blk = c.differential(i).kron(&PolyMatrix::identity(ring, d.rank(j)));
                m.paste(t, off, &blk);
            }
            if let Some(t) = lay.offset(i, j + 1) {
                let mut blk = PolyMatrix::identity(ring, c.rank(i)).kron(&d.differential(j));
                if i.rem_euclid(2) == 1 {
                    blk = blk.neg();
                }
                m.paste(t, off, &blk);
            }
        }
        diffs.push(m);
    }
    Ok(ChainComplex::new(ring, lay.lo, ranks, diffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Field, OrderKind, PolyRing, Ring};

    fn ring(vars: &[&str]) -> Ring {
        PolyRing::new(vars, Field::Rational, OrderKind::Degrevlex).unwrap()
    }

    fn k1(r: &Ring, v: &str) -> ChainComplex {
        ChainComplex::new(r, -1, vec![1, 1], vec![PolyMatrix::parse(r, &[vec![v.to_string()]]).unwrap()])
    }

    #[test]
    fn koszul_multiplicativity() {
        let r = ring(&["x", "y"]);
        let t = tensor_complexes(&k1(&r, "x"), &k1(&r, "y")).unwrap();
        assert!(t.validate().is_ok());
        assert_eq!(t.ranks(), &[1, 2, 1]);
        assert!(t.homology(-1).unwrap().presentation.is_zero().unwrap().is_zero());
        assert!(t.homology(-2).unwrap().presentation.is_zero().unwrap().is_zero());
    }

    #[test]
    fn unit_complex() {
        let r = ring(&["x", "y"]);
        let c = k1(&r, "x");
        let u = ChainComplex::concentrated(&r, 0, 1);
        assert_eq!(tensor_complexes(&c, &u).unwrap(), c);
    }

    #[test]
    fn self_intersection_of_a_hyperplane() {
        let r = ring(&["x"]);
        let t = tensor_complexes(&k1(&r, "x"), &k1(&r, "x")).unwrap();
        assert!(t.validate().is_ok());
        let h = t.homology(-1).unwrap().minimized();
        assert_eq!(h.presentation.rank(), 1);
        assert_eq!(h.presentation.relations(), &PolyMatrix::parse(&r, &[vec!["x".into()]]).unwrap());
    }
}
