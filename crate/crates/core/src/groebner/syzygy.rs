//! Syzygy modules via Schreyer's construction on a cofactor-tracked basis.

use super::buchberger::{s_vector, Lead};
use super::matrix::{FreeModuleElem, PolyMatrix};
use super::order::ModuleOrder;
use super::{build, groebner_basis, rering};
use crate::error::{Error, Result};
use crate::polyring::Polynomial;

/// Generators of `ker(M) ⊆ R^cols`, as the columns of the returned matrix.
pub fn syzygies(m: &PolyMatrix) -> Result<PolyMatrix> {
    let ring = m.ring().clone();
    let s = m.cols();
    let ord = ModuleOrder::top(ring.order());
    let f = m.columns();
    let gb = build(&ring, m.rows(), &f, &ord, true)?;
    let g = gb.generators();
    let leads: &[Lead] = gb.leads();
    let tags = gb.tags().expect("tracked");
    let t = g.len();
    let red = gb.reducer();

    // A·v for v in R^t
    let through_a = |v: &[Polynomial]| -> FreeModuleElem {
        let mut out = FreeModuleElem::zero(&ring, s);
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&tags[k].scale(c));
            }
        }
        out
    };

    let mut cands: Vec<FreeModuleElem> = Vec::new();

    // columns of I - A·B, where f_i = Σ_k B_ki g_k
    for (i, fi) in f.iter().enumerate() {
        let mut q = vec![ring.zero(); t];
        let rem = red.reduce(fi.clone(), false, |k, mono, c| {
            q[k] = &q[k] + &ring.monomial(mono.clone(), c.clone());
        });
        if !rem.is_zero() {
            return Err(Error::Invariant("input column does not reduce to zero against its own basis".into()));
        }
        cands.push(FreeModuleElem::basis(&ring, s, i).sub(&through_a(&q)));
    }

    // Schreyer syzygies of the basis, pulled back through A
    for j in 0..t {
        for i in 0..j {
            if leads[i].pos != leads[j].pos {
                continue;
            }
            let lcm = leads[i].mono.lcm(&leads[j].mono);
            let prunable = (0..t).any(|k| {
                k != i
                    && k != j
                    && leads[k].pos == leads[i].pos
                    && leads[k].mono.divides(&lcm)
                    && leads[i].mono.lcm(&leads[k].mono) != lcm
                    && leads[j].mono.lcm(&leads[k].mono) != lcm
            });
            if prunable {
                continue;
            }
            let (sv, ai, mi, aj, mj) = s_vector(g, leads, i, j).expect("same position");
            let mut sigma = vec![ring.zero(); t];
            sigma[i] = ring.monomial(mi, ai);
            sigma[j] = -&ring.monomial(mj, aj);
            let rem = red.reduce(sv, false, |k, mono, c| {
                sigma[k] = &sigma[k] - &ring.monomial(mono.clone(), c.clone());
            });
            if !rem.is_zero() {
                return Err(Error::Invariant("S-vector of a Gröbner basis failed to reduce".into()));
            }
            cands.push(through_a(&sigma));
        }
    }

    let mut uniq: Vec<FreeModuleElem> = Vec::new();
    for c in cands {
        if !c.is_zero() && !uniq.contains(&c) {
            uniq.push(c);
        }
    }
    let syz = groebner_basis(&ring, s, &uniq, &ord)?;
    let cols: Vec<FreeModuleElem> = syz.generators().iter().map(|v| rering(v, &ring)).collect();
    let out = PolyMatrix::from_columns(&ring, s, &cols)?;
    debug_assert!(m.mul(&out).is_zero());
    Ok(out)
}

/// Independent kernel computation: a position-over-term basis of the
/// columns of `[M; I]`, keeping the elements whose `M`-block vanishes.
pub fn syzygies_by_elimination(m: &PolyMatrix) -> Result<PolyMatrix> {
    let ring = m.ring().clone();
    let (r, s) = (m.rows(), m.cols());
    let stacked = m.vstack(&PolyMatrix::identity(&ring, s));
    let gb = groebner_basis(&ring, r + s, &stacked.columns(), &ModuleOrder::pot(ring.order()))?;
    let cols: Vec<FreeModuleElem> = gb
        .generators()
        .iter()
        .filter(|v| v.comps()[..r].iter().all(|p| p.is_zero()))
        .map(|v| rering(&v.slice(r..r + s), &ring))
        .collect();
    PolyMatrix::from_columns(&ring, s, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::lift::ImageBasis;
    use crate::polyring::{Field, OrderKind, PolyRing, Ring};

    fn r(vars: &[&str]) -> Ring {
        PolyRing::new(vars, Field::Rational, OrderKind::Degrevlex).unwrap()
    }

    fn mat(r: &Ring, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::parse(r, &rows.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    /// Every column of `a` lies in the span of `b` and vice versa.
    fn same_span(a: &PolyMatrix, b: &PolyMatrix) -> bool {
        let ia = ImageBasis::new(a).unwrap();
        let ib = ImageBasis::new(b).unwrap();
        a.columns().iter().all(|c| ib.contains(c).unwrap()) && b.columns().iter().all(|c| ia.contains(c).unwrap())
    }

    #[test]
    fn koszul_syzygy_of_x_y() {
        let ring = r(&["x", "y"]);
        let m = mat(&ring, &[&["x", "y"]]);
        let s = syzygies(&m).unwrap();
        assert_eq!(s.cols(), 1);
        assert!(same_span(&s, &mat(&ring, &[&["y"], &["-x"]])));
    }

    #[test]
    fn identity_has_no_syzygies() {
        let ring = r(&["x"]);
        assert_eq!(syzygies(&PolyMatrix::identity(&ring, 2)).unwrap().cols(), 0);
    }

    #[test]
    fn repeated_column() {
        let ring = r(&["x"]);
        let s = syzygies(&mat(&ring, &[&["x", "x"]])).unwrap();
        assert!(same_span(&s, &mat(&ring, &[&["1"], &["-1"]])));
    }

    #[test]
    fn agrees_with_elimination() {
        let ring = r(&["x", "y", "z"]);
        let m = mat(&ring, &[&["x*y", "y*z", "x*z", "x^2"], &["z", "0", "y", "x - y"]]);
        let a = syzygies(&m).unwrap();
        let b = syzygies_by_elimination(&m).unwrap();
        assert!(m.mul(&a).is_zero());
        assert!(m.mul(&b).is_zero());
        assert!(same_span(&a, &b));
    }

    #[test]
    fn zero_rows_give_everything() {
        let ring = r(&["x"]);
        let m = PolyMatrix::zeros(&ring, 0, 2);
        assert!(same_span(&syzygies(&m).unwrap(), &PolyMatrix::identity(&ring, 2)));
    }
}
