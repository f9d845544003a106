//! Gröbner bases for ideals and submodules of free modules, with normal
//! forms, syzygies, lifts and finitely presented modules.

mod buchberger;
mod lift;
mod matrix;
mod order;
mod presentation;
mod syzygy;

use std::cell::Cell;

pub use buchberger::GroebnerBasis;
pub use lift::{lift, lift_columns, module_is_zero, span_contains, normal_form, ImageBasis, Lifted, ZeroCertificate};
pub use matrix::{field_rank, FreeModuleElem, MatrixJson, PolyMatrix, RingJson};
pub use order::{ModuleOrder, PositionRule};
pub use presentation::{present_subquotient, Minimized, ModulePresentation};
pub use syzygy::{syzygies, syzygies_by_elimination};

use crate::error::{Error, Result};
use crate::polyring::{same_ring, PolyRing, Polynomial, Ring};

thread_local! {
    static DEGREE_CAP: Cell<Option<u32>> = const { Cell::new(None) };
    static AUDIT: Cell<bool> = const { Cell::new(false) };
    static AUDITED: Cell<u64> = const { Cell::new(0) };
    static AUDIT_FAILURES: Cell<u64> = const { Cell::new(0) };
}

/// Caps the degree of S-pairs on the current thread; a pair beyond the cap
/// aborts with [`Error::DegreeCap`]. `None` removes the cap.
pub fn set_degree_cap(cap: Option<u32>) {
    DEGREE_CAP.with(|c| c.set(cap));
}

pub fn degree_cap() -> Option<u32> {
    DEGREE_CAP.with(|c| c.get())
}

/// When enabled, every basis the engine produces on the current thread is
/// checked against the Buchberger criterion and reducedness.
pub fn set_audit(on: bool) {
    AUDIT.with(|a| a.set(on));
}

/// `(bases checked, bases failing)` since the last reset.
pub fn audit_counts() -> (u64, u64) {
    (AUDITED.with(|c| c.get()), AUDIT_FAILURES.with(|c| c.get()))
}

pub fn reset_audit_counts() {
    AUDITED.with(|c| c.set(0));
    AUDIT_FAILURES.with(|c| c.set(0));
}

fn audit_record(gb: &GroebnerBasis) {
    if AUDIT.with(|a| a.get()) {
        AUDITED.with(|c| c.set(c.get() + 1));
        if !(gb.satisfies_buchberger_criterion() && gb.check_reduced()) {
            AUDIT_FAILURES.with(|c| c.set(c.get() + 1));
        }
    }
}

/// Moves a vector into `target` (same variables, possibly another order).
fn rering(v: &FreeModuleElem, target: &Ring) -> FreeModuleElem {
    if same_ring(v.ring(), target) {
        return v.clone();
    }
    v.restrict_to(target).expect("same variables")
}

fn working_ring(ring: &Ring, ord: &ModuleOrder) -> Ring {
    if ring.order() == ord.kind {
        ring.clone()
    } else {
        ring.with_order(ord.kind)
    }
}

/// Reduced Gröbner basis of the submodule of `R^rank` spanned by `gens`.
/// If `ord.kind` differs from the ring's order, the basis lives in a copy of
/// the ring carrying `ord.kind`.
pub fn groebner_basis(ring: &Ring, rank: usize, gens: &[FreeModuleElem], ord: &ModuleOrder) -> Result<GroebnerBasis> {
    build(ring, rank, gens, ord, false)
}

pub(crate) fn build(
    ring: &Ring,
    rank: usize,
    gens: &[FreeModuleElem],
    ord: &ModuleOrder,
    track: bool,
) -> Result<GroebnerBasis> {
    for (i, g) in gens.iter().enumerate() {
        if g.len() != rank {
            return Err(Error::Shape(format!("generator {i} has length {} in rank {rank}", g.len())));
        }
        if g.ring().vars() != ring.vars() || g.ring().field() != ring.field() {
            return Err(Error::RingMismatch);
        }
    }
    let work = working_ring(ring, ord);
    let inputs: Vec<FreeModuleElem> = gens.iter().map(|g| rering(g, &work)).collect();
    buchberger::buchberger(&work, rank, &inputs, ord, track)
}

/// Reduced basis of an ideal under the ring's own order.
pub fn ideal_basis(ring: &Ring, gens: &[Polynomial]) -> Result<GroebnerBasis> {
    let vecs: Vec<FreeModuleElem> = gens.iter().map(|g| FreeModuleElem::new(ring, vec![g.clone()])).collect();
    groebner_basis(ring, 1, &vecs, &ModuleOrder::top(ring.order()))
}

/// Normal form of a polynomial modulo an ideal basis.
pub fn reduce_polynomial(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    let v = FreeModuleElem::new(f.ring(), vec![f.clone()]);
    Ok(normal_form(&v, gb)?.into_comps().pop().expect("rank one"))
}

/// A fresh ring `field[names]` with the order and field of `like`.
pub fn ring_like<S: AsRef<str>>(like: &Ring, names: &[S]) -> Result<Ring> {
    PolyRing::new(names, like.field(), like.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Field, OrderKind};

    fn elems(r: &Ring, gens: &[&str]) -> Vec<FreeModuleElem> {
        gens.iter().map(|g| FreeModuleElem::new(r, vec![r.parse(g).unwrap()])).collect()
    }

    fn strings(gb: &GroebnerBasis) -> Vec<String> {
        gb.generators().iter().map(|g| g.get(0).to_string()).collect()
    }

    #[test]
    fn x_squared_minus_one_collapses() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Lex).unwrap();
        let gb = groebner_basis(&r, 1, &elems(&r, &["x^2 - 1", "x - 1"]), &ModuleOrder::top(OrderKind::Lex)).unwrap();
        assert_eq!(strings(&gb), vec!["x - 1"]);
    }

    #[test]
    fn duplicate_generators_are_idempotent() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let gb = groebner_basis(&r, 1, &elems(&r, &["x", "x"]), &ModuleOrder::default()).unwrap();
        assert_eq!(strings(&gb), vec!["x"]);
    }

    #[test]
    fn coordinate_ideal_is_already_reduced() {
        let r = PolyRing::new(&["x", "y"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let gb = groebner_basis(&r, 1, &elems(&r, &["x", "y"]), &ModuleOrder::default()).unwrap();
        let mut s = strings(&gb);
        s.sort();
        assert_eq!(s, vec!["x", "y"]);
    }

    #[test]
    fn mixed_ranks_rejected() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let gens = vec![FreeModuleElem::basis(&r, 2, 0), FreeModuleElem::basis(&r, 1, 0)];
        assert!(matches!(groebner_basis(&r, 2, &gens, &ModuleOrder::default()), Err(Error::Shape(_))));
    }

    #[test]
    fn other_order_kind_is_respected() {
        let r = PolyRing::new(&["x", "y"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let gens = elems(&r, &["x - y^2"]);
        let gb = groebner_basis(&r, 1, &gens, &ModuleOrder::top(OrderKind::Lex)).unwrap();
        assert_eq!(gb.leading_terms()[0].1.exponents(), &[1, 0]);
        let gb2 = groebner_basis(&r, 1, &gens, &ModuleOrder::default()).unwrap();
        assert_eq!(gb2.leading_terms()[0].1.exponents(), &[0, 2]);
    }

    #[test]
    fn degree_cap_aborts() {
        let r = PolyRing::new(&["x", "y", "z"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let gens = elems(&r, &["x^2*y - z^3", "x*y^2 - z^3"]);
        set_degree_cap(Some(2));
        let res = groebner_basis(&r, 1, &gens, &ModuleOrder::default());
        set_degree_cap(None);
        assert!(matches!(res, Err(Error::DegreeCap { cap: 2, .. })));
    }
}
