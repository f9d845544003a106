//! Dense linear algebra over ℚ for coordinate frames.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) type QMat = Vec<Vec<BigRational>>;

pub(crate) fn to_q(rows: &[Vec<i64>]) -> QMat {
    rows.iter().map(|r| r.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()).collect()
}

/// Reduced row echelon form and pivot columns.
pub(crate) fn rref(m: &QMat, ncols: usize) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
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
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub(crate) fn rank(m: &QMat, ncols: usize) -> usize {
    rref(m, ncols).1.len()
}

/// Basis of `{a : a·M = 0}` for `M` with `rows` rows.
pub(crate) fn left_kernel(m: &QMat, ncols: usize) -> QMat {
    let rows = m.len();
    let t: QMat = (0..ncols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
    nullspace(&t, rows)
}

/// Basis of `{v : A·v = 0}`.
pub(crate) fn nullspace(a: &QMat, ncols: usize) -> QMat {
    let (r, pivots) = rref(a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// Integer multiple with coprime entries and positive first nonzero entry.
pub(crate) fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -g } else { g };
    ints.into_iter().map(|x| x / &sign).collect()
}

pub(crate) fn to_i64_row(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Degenerate(format!("coefficient {x} exceeds 64 bits"))))
        .collect()
}

pub(crate) fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub(crate) fn in_span(basis: &QMat, v: &[BigRational], ncols: usize) -> bool {
    let mut m = basis.clone();
    m.push(v.to_vec());
    rank(&m, ncols) == rank(basis, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> QMat {
        to_q(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_and_rank() {
        let m = q(&[&[1, 1, 0], &[1, -1, 0], &[2, 0, 0]]);
        assert_eq!(rank(&m, 3), 2);
        let k = left_kernel(&m, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(primitive(&k[0]), vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, q(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let v: Vec<BigRational> = vec![BigRational::new((-2).into(), 3.into()), BigRational::from_integer(4.into())];
        assert_eq!(primitive(&v), vec![BigInt::from(1), BigInt::from(-6)]);
    }
}
