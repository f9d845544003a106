//! Koszul complexes, the derived restriction `K(x̲, t̲) ⊗ O_Y` of a linear
//! pair, its Tor modules, their identification with `Λ^k E`, the wedge
//! product on Tor and the chain map `γ` into the Atiyah–Kashiwara complex.

mod exterior;
mod gamma;

use serde::{Deserialize, Serialize};

pub use exterior::{binomial, determinant, ExteriorBasis};
pub use gamma::{gamma_chain_map, gamma_formula, GammaMap, GammaScaling};
pub(crate) use gamma::ak_differential;

use crate::cycles::LinearCyclePair;
use crate::error::{Error, Result};
use crate::groebner::{span_contains, FreeModuleElem, ImageBasis, Lifted, ModulePresentation, PolyMatrix};
use crate::homalg::{check_presented_map, ChainComplex, HomologyModule, PresentedMapCheck};
use crate::polyring::{Polynomial, Ring};

/// Koszul complex of `seq` over `ring`: `Λ^k R^c` in degree `−k`.
pub fn koszul_complex(seq: &[Polynomial], ring: &Ring) -> Result<ChainComplex> {
    if seq.iter().any(|f| !crate::polyring::same_ring(f.ring(), ring)) {
        return Err(Error::RingMismatch);
    }
    let labels: Vec<String> = (1..=seq.len()).map(|i| format!("e{i}")).collect();
    Ok(koszul_on(&ExteriorBasis::new(&labels), seq, ring))
}

pub(crate) fn koszul_on(basis: &ExteriorBasis, seq: &[Polynomial], ring: &Ring) -> ChainComplex {
    let c = seq.len();
    let ranks: Vec<usize> = (0..=c).rev().map(|k| basis.dim(k)).collect();
    let diffs: Vec<PolyMatrix> = (1..=c).rev().map(|k| basis.contraction_matrix(ring, seq, k)).collect();
    ChainComplex::new(ring, -(c as i32), ranks, diffs)
}

/// `K(x̲, t̲) ⊗_{O_Z} O_Y` as a complex of free `O_Y = k[x̲, z̲]`-modules.
#[derive(Clone, Debug)]
pub struct DerivedRestriction {
    pair: LinearCyclePair,
    basis: ExteriorBasis,
    complex: ChainComplex,
}

pub fn derived_restriction(pair: &LinearCyclePair) -> Result<DerivedRestriction> {
    pair.verify_adapted()?;
    let ring = pair.ring_y();
    let b = pair.blocks();
    let labels: Vec<String> = pair.conormal_names().iter().map(|n| format!("d{n}")).collect();
    let basis = ExteriorBasis::new(&labels);
    // t̲ vanishes on Y
    let seq: Vec<Polynomial> = (0..b.p).map(|a| ring.variable(a)).chain((0..b.r).map(|_| ring.zero())).collect();
    let complex = koszul_on(&basis, &seq, &ring);
    Ok(DerivedRestriction { pair: pair.clone(), basis, complex })
}

/// The same object computed in the original coordinates: the Koszul complex
/// of the equations of `X` over `k[u̲]`, each term presented modulo `I_Y`.
pub fn derived_restriction_ambient(pair: &LinearCyclePair) -> Result<ChainComplex> {
    let ring = pair.ambient_ring();
    let kx = koszul_complex(&pair.ambient_equations_x(), &ring)?;
    let iy = pair.ambient_equations_y();
    let row = PolyMatrix::from_rows(&ring, vec![iy.clone()]).unwrap_or_else(|_| PolyMatrix::zeros(&ring, 1, 0));
    let rels = kx.ranks().iter().map(|&n| PolyMatrix::identity(&ring, n).kron(&row)).collect();
    let c = kx.with_term_relations(rels)?;
    // entries reduced modulo I_Y keep the matrices small
    if iy.is_empty() {
        return Ok(c);
    }
    let gb = crate::groebner::ideal_basis(&ring, &iy)?;
    c.map_ring(&ring, |m| Ok(m.map_entries(&ring, |f| crate::groebner::reduce_polynomial(f, &gb).expect("same ring"))))
}

/// Ranks over `O_T` of the homology of [`derived_restriction_ambient`],
/// moved to adapted coordinates.
pub fn ambient_tor_ranks(pair: &LinearCyclePair) -> Result<Vec<usize>> {
    let c = derived_restriction_ambient(pair)?;
    let images = pair.ambient_to_adapted()?;
    let adapted = pair.ring();
    let rt = pair.ring_t();
    let mut out = Vec::new();
    for k in 0..=pair.codim_x() {
        let h = c.homology(-(k as i32))?;
        let rel = h.presentation.relations().map_entries(&rt, |f| {
            f.substitute(&adapted, &images).restrict_to(&rt).expect("same field")
        });
        out.push(h.presentation.rank() - rel.generic_rank());
    }
    Ok(out)
}

impl DerivedRestriction {
    pub fn pair(&self) -> &LinearCyclePair {
        &self.pair
    }

    pub fn basis(&self) -> &ExteriorBasis {
        &self.basis
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn ring(&self) -> &Ring {
        self.complex.ring()
    }

    pub fn codim(&self) -> usize {
        self.basis.rank()
    }

    /// Basis of `Λ^• E` on the `dt̲`.
    pub fn excess_basis(&self) -> ExteriorBasis {
        let labels: Vec<String> = self.pair.t_names().iter().map(|n| format!("d{n}")).collect();
        ExteriorBasis::new(&labels)
    }

    /// The Koszul basis vector `dt_J` in degree `−|J|`.
    pub fn dt_vector(&self, j: &[usize]) -> FreeModuleElem {
        let p = self.pair.blocks().p;
        let s: Vec<usize> = j.iter().map(|&t| p + t).collect();
        let k = s.len();
        FreeModuleElem::basis(self.ring(), self.basis.dim(k), self.basis.index_of(&s).expect("subset"))
    }

    /// `Λ^k ρ` for a retraction `ρ : N̂* → E` over `O_T`, as a matrix over
    /// `O_Y` from `Λ^k N̂` to `Λ^k E`.
    pub fn wedge_retraction(&self, rho: &PolyMatrix, k: usize) -> Result<PolyMatrix> {
        let e = self.excess_basis();
        let rho_y = rho.embed_into(self.ring())?;
        Ok(ExteriorBasis::exterior_power(self.ring(), &rho_y, k, &self.basis, &e))
    }

    /// The canonical retraction `dx̲ ↦ 0, dt̲ ↦ dt̲` over `O_T`.
    pub fn canonical_retraction(&self) -> PolyMatrix {
        let b = self.pair.blocks();
        let rt = self.pair.ring_t();
        let mut m = PolyMatrix::zeros(&rt, b.r, b.p + b.r);
        for j in 0..b.r {
            m.set(j, b.p + j, rt.one());
        }
        m
    }

    /// Restriction of a vector over `O_Y` to `O_T` (`x̲ = 0`).
    pub fn to_t(&self, v: &FreeModuleElem) -> FreeModuleElem {
        v.restrict_to(&self.pair.ring_t()).expect("same field")
    }

    /// `O_T^n` written over `O_Y`: `n` generators killed by `x̲`.
    pub fn t_module(&self, n: usize) -> ModulePresentation {
        let ring = self.ring();
        let p = self.pair.blocks().p;
        let mut rel = PolyMatrix::zeros(ring, n, 0);
        for a in 0..p {
            rel = rel.hstack(&PolyMatrix::identity(ring, n).scale(&ring.variable(a)));
        }
        ModulePresentation::new(n, rel).expect("rows match")
    }
}

/// `H^{-k}` of the derived restriction, with its reduction to `O_T`.
#[derive(Clone, Debug)]
pub struct TorModule {
    pub k: usize,
    pub homology: HomologyModule,
    /// `H ⊗ O_T`, presented over `O_T`.
    pub over_t: ModulePresentation,
    pub generic_rank: usize,
    /// `x̲·H = 0`, so `H` is an `O_T`-module and `over_t` is `H` itself.
    pub killed_by_x: bool,
}

pub fn tor_modules(dr: &DerivedRestriction) -> Result<Vec<TorModule>> {
    let ring = dr.ring();
    let rt = dr.pair.ring_t();
    let p = dr.pair.blocks().p;
    let mut out = Vec::new();
    for k in 0..=dr.codim() {
        let homology = dr.complex.homology(-(k as i32))?;
        let pres = &homology.presentation;
        let n = pres.rank();
        let mut killed_by_x = true;
        for a in 0..p {
            let xm = PolyMatrix::identity(ring, n).scale(&ring.variable(a));
            if !span_contains(pres.relations(), &xm)? {
                killed_by_x = false;
            }
        }
        let rel_t = pres.relations().restrict_to(&rt)?.nonzero_columns();
        let over_t = ModulePresentation::new(n, rel_t)?;
        let generic_rank = over_t.generic_rank();
        out.push(TorModule { k, homology, over_t, generic_rank, killed_by_x });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub k: usize,
    pub rank_wedge_e: usize,
    pub tor_rank: usize,
    pub map: PresentedMapCheck,
}

/// `Λ^k E → H^{-k}`, `e_{t_J} ↦ [dt_J]`, tested degree by degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorComparison {
    pub verdict: bool,
    pub degrees: Vec<DegreeComparison>,
}

/// Matrix of `Λ^k E → H^{-k}` in the cycle-basis generators of `H^{-k}`.
pub fn excess_to_tor_matrix(dr: &DerivedRestriction, tor: &TorModule) -> Result<PolyMatrix> {
    let e = dr.excess_basis();
    let z = &tor.homology.cycle_basis;
    let ring = dr.ring();
    let gens = tor.homology.presentation.rank();
    let subsets = e.subsets(tor.k);
    if subsets.is_empty() {
        return Ok(PolyMatrix::zeros(ring, gens, 0));
    }
    let image = if z.cols() > 0 { Some(ImageBasis::new(z)?) } else { None };
    let mut cols = Vec::new();
    for (i, j) in subsets.iter().enumerate() {
        let v = dr.dt_vector(j);
        match image.as_ref().map(|im| im.lift(&v)).transpose()? {
            Some(Lifted::Lifted(c)) => cols.push(c),
            _ => return Err(Error::NotSubmodule { column: i, remainder: format!("{} is not a cycle", e.label(j)) }),
        }
    }
    PolyMatrix::from_columns(ring, gens, &cols)
}

pub fn tor_excess_compare(dr: &DerivedRestriction, tors: &[TorModule]) -> Result<TorComparison> {
    let r = dr.pair.excess_rank();
    let mut degrees = Vec::new();
    for tor in tors {
        let rank_wedge_e = binomial(r, tor.k);
        let map = match excess_to_tor_matrix(dr, tor) {
            Ok(phi) => check_presented_map(&phi, &dr.t_module(rank_wedge_e), &tor.homology.presentation)?,
            Err(Error::NotSubmodule { remainder, .. }) => PresentedMapCheck {
                well_defined: false,
                injective: false,
                surjective: false,
                witness: Some(remainder),
            },
            Err(e) => return Err(e),
        };
        degrees.push(DegreeComparison { k: tor.k, rank_wedge_e, tor_rank: tor.generic_rank, map });
    }
    let verdict = degrees.iter().all(|d| d.map.is_iso() && d.rank_wedge_e == d.tor_rank);
    Ok(TorComparison { verdict, degrees })
}

/// Products on Tor in the `Λ E` basis, with the checks that tie them to the
/// exterior algebra.
#[derive(Clone, Debug)]
pub struct WedgeTable {
    pub i: usize,
    pub j: usize,
    /// `table[a][b]` = class of `dt_{I_a} ∧ dt_{J_b}` in `Λ^{i+j} E` over `O_T`.
    pub table: Vec<Vec<FreeModuleElem>>,
    /// The table equals the exterior product `e_I ∧ e_J`.
    pub matches_exterior: bool,
    /// On the actual homology generators, the Koszul product followed by
    /// the identification with `Λ E` equals the exterior product of the
    /// identified factors.
    pub generators_match: bool,
    /// `[g]·[h] = (−1)^{ij} [h]·[g]` on homology generators.
    pub graded_commutative: bool,
    /// The identification `H^{-k} → Λ^k E` inverts `Λ^k E → H^{-k}` in the
    /// degrees involved.
    pub identifications_inverse: bool,
}

/// `H^{-k} → Λ^k E`: the `dt_J`-coefficients of a cycle at `x̲ = 0`.
pub fn tor_to_excess(dr: &DerivedRestriction, k: usize, v: &FreeModuleElem) -> FreeModuleElem {
    let theta = dr.wedge_retraction(&dr.canonical_retraction(), k).expect("same field");
    dr.to_t(&theta.apply(v))
}

fn identifications_inverse(dr: &DerivedRestriction, tor: &TorModule) -> Result<bool> {
    let k = tor.k;
    let e = dr.excess_basis();
    let phi = excess_to_tor_matrix(dr, tor)?;
    let z = &tor.homology.cycle_basis;
    // Ψ∘Φ = id on Λ^k E
    for (i, j) in e.subsets(k).iter().enumerate() {
        let back = tor_to_excess(dr, k, &z.apply(&phi.column(i)));
        if back != FreeModuleElem::basis(&dr.pair.ring_t(), e.dim(k), i) {
            let _ = j;
            return Ok(false);
        }
    }
    // Φ∘Ψ = id on H^{-k}: g − Σ Ψ(g)_J dt_J is a boundary
    let deg = -(k as i32);
    for g in z.columns() {
        let psi = tor_to_excess(dr, k, &g);
        let mut rep = FreeModuleElem::zero(dr.ring(), g.len());
        for (i, j) in e.subsets(k).iter().enumerate() {
            let c = psi.get(i).embed_into(dr.ring())?;
            rep = rep.add(&dr.dt_vector(j).scale(&c));
        }
        if !dr.complex.is_boundary(deg, &g.sub(&rep))? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn tor_wedge_product(dr: &DerivedRestriction, tors: &[TorModule], i: usize, j: usize) -> Result<WedgeTable> {
    let c = dr.codim();
    if i > c || j > c {
        return Err(Error::DegreeOutOfRange { degree: -((i.max(j)) as i32), lo: -(c as i32), hi: 0 });
    }
    let ring = dr.ring();
    let rt = dr.pair.ring_t();
    let e = dr.excess_basis();
    let kb = &dr.basis;
    let k = i + j;
    let dim_k = e.dim(k);

    let mut table = Vec::new();
    let mut matches_exterior = true;
    for a in e.subsets(i) {
        let mut row = Vec::new();
        for b in e.subsets(j) {
            let prod = kb.wedge_vectors(ring, i, &dr.dt_vector(a), j, &dr.dt_vector(b));
            let cls = if k <= c { tor_to_excess(dr, k, &prod) } else { FreeModuleElem::zero(&rt, 0) };
            let expected = match ExteriorBasis::wedge(a, b) {
                Some((sign, u)) if k <= c => {
                    let v = FreeModuleElem::basis(&rt, dim_k, e.index_of(&u).expect("subset"));
                    if sign > 0 { v } else { v.neg() }
                }
                _ => FreeModuleElem::zero(&rt, dim_k),
            };
            matches_exterior &= cls == expected;
            row.push(cls);
        }
        table.push(row);
    }

    let gi = &tors[i].homology.cycle_basis;
    let gj = &tors[j].homology.cycle_basis;
    let mut generators_match = true;
    let mut graded_commutative = true;
    let sign_ij = if (i * j).is_multiple_of(2) { 1 } else { -1 };
    for g in gi.columns() {
        for h in gj.columns() {
            let gh = kb.wedge_vectors(ring, i, &g, j, &h);
            let hg = kb.wedge_vectors(ring, j, &h, i, &g);
            if k > c {
                continue;
            }
            // the product of cycles is a cycle
            if !dr.complex.differential(-(k as i32)).apply(&gh).is_zero() {
                generators_match = false;
            }
            let lhs = tor_to_excess(dr, k, &gh);
            let rhs = e.wedge_vectors(&rt, i, &tor_to_excess(dr, i, &g), j, &tor_to_excess(dr, j, &h));
            generators_match &= lhs == rhs;
            let swapped = tor_to_excess(dr, k, &hg);
            graded_commutative &= if sign_ij > 0 { lhs == swapped } else { lhs == swapped.neg() };
        }
    }

    let mut identifications = identifications_inverse(dr, &tors[i])? && identifications_inverse(dr, &tors[j])?;
    if k <= c {
        identifications &= identifications_inverse(dr, &tors[k])?;
    }
    Ok(WedgeTable { i, j, table, matches_exterior, generators_match, graded_commutative, identifications_inverse: identifications })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::adapt_coordinates;
    use crate::groebner::ModulePresentation;
    use crate::polyring::{Field, OrderKind, PolyRing};

    fn pair(x: &[&[i64]], y: &[&[i64]], n: usize) -> LinearCyclePair {
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        adapt_coordinates(&v(x), &v(y), n, Field::Rational).unwrap()
    }

    pub(crate) fn running() -> LinearCyclePair {
        pair(&[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[&[0, 1, 0, 0], &[0, 0, 1, 0]], 4)
    }

    fn r2_pair() -> LinearCyclePair {
        pair(&[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]], &[&[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]], 5)
    }

    fn ranks(p: &LinearCyclePair) -> Vec<usize> {
        tor_modules(&derived_restriction(p).unwrap()).unwrap().iter().map(|t| t.generic_rank).collect()
    }

    #[test]
    fn koszul_of_x_y() {
        let r = PolyRing::new(&["x", "y"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let k = koszul_complex(&[r.variable(0), r.variable(1)], &r).unwrap();
        assert_eq!(k.ranks(), &[1, 2, 1]);
        assert!(k.validate().is_ok());
        let h0 = k.homology(0).unwrap();
        assert_eq!(h0.presentation.relations().cols(), 2);
        for i in [-2, -1] {
            assert!(k.homology(i).unwrap().presentation.is_zero().unwrap().is_zero());
        }
    }

    #[test]
    fn koszul_of_a_unit_is_acyclic() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let k = koszul_complex(&[r.one()], &r).unwrap();
        for i in k.degrees() {
            assert!(k.homology(i).unwrap().presentation.is_zero().unwrap().is_zero());
        }
    }

    #[test]
    fn koszul_resolves_the_running_cycle() {
        let p = running();
        let r = p.ring();
        let k = koszul_complex(&[r.var("x1").unwrap(), r.var("t1").unwrap()], &r).unwrap();
        assert!(k.homology(-1).unwrap().presentation.is_zero().unwrap().is_zero());
        let h0 = k.homology(0).unwrap().minimized();
        assert_eq!(h0.presentation.rank(), 1);
    }

    #[test]
    fn running_pair_tor() {
        let dr = derived_restriction(&running()).unwrap();
        assert_eq!(dr.complex().ranks(), &[1, 2, 1]);
        let tors = tor_modules(&dr).unwrap();
        assert_eq!(tors.iter().map(|t| t.generic_rank).collect::<Vec<_>>(), vec![1, 1, 0]);
        assert!(tors.iter().all(|t| t.killed_by_x));
        assert!(tor_excess_compare(&dr, &tors).unwrap().verdict);
    }

    #[test]
    fn r2_pair_tor() {
        assert_eq!(ranks(&r2_pair()), vec![1, 2, 1, 0]);
        let dr = derived_restriction(&r2_pair()).unwrap();
        let tors = tor_modules(&dr).unwrap();
        let cmp = tor_excess_compare(&dr, &tors).unwrap();
        assert!(cmp.verdict, "{cmp:?}");
    }

    #[test]
    fn transverse_pair_has_no_higher_tor() {
        let p = pair(&[&[1, 0]], &[&[0, 1]], 2);
        let dr = derived_restriction(&p).unwrap();
        let tors = tor_modules(&dr).unwrap();
        assert_eq!(tors.iter().map(|t| t.generic_rank).collect::<Vec<_>>(), vec![1, 0]);
        assert!(tors[1].homology.presentation.is_zero().unwrap().is_zero());
    }

    #[test]
    fn self_intersection_tor_is_free() {
        let p = pair(&[&[1, 0, 0], &[0, 1, 0]], &[&[1, 0, 0], &[0, 1, 0]], 3);
        let dr = derived_restriction(&p).unwrap();
        for t in tor_modules(&dr).unwrap() {
            let m = t.homology.minimized();
            assert_eq!(m.presentation.rank(), binomial(2, t.k));
            assert_eq!(m.presentation.relations().cols(), 0);
        }
    }

    #[test]
    fn ambient_route_agrees() {
        for p in [running(), pair(&[&[1, 1, 0], &[0, 0, 1]], &[&[1, -1, 0], &[0, 0, 1]], 3)] {
            assert_eq!(ambient_tor_ranks(&p).unwrap(), ranks(&p));
        }
    }

    #[test]
    fn tor_symmetry() {
        let p = pair(&[&[1, 2, 0, 1], &[0, 1, 1, 1]], &[&[1, 3, 1, 2], &[2, 0, 1, -1]], 4);
        let q = adapt_coordinates(p.equations_y(), p.equations_x(), 4, Field::Rational).unwrap();
        assert_eq!(ranks(&p), ranks(&q)[..ranks(&p).len()]);
    }

    #[test]
    fn wedge_on_codim_two_self_intersection() {
        let p = pair(&[&[1, 0, 0], &[0, 1, 0]], &[&[1, 0, 0], &[0, 1, 0]], 3);
        let dr = derived_restriction(&p).unwrap();
        let tors = tor_modules(&dr).unwrap();
        let w = tor_wedge_product(&dr, &tors, 1, 1).unwrap();
        let rt = p.ring_t();
        let one = FreeModuleElem::basis(&rt, 1, 0);
        let zero = FreeModuleElem::zero(&rt, 1);
        assert_eq!(w.table, vec![vec![zero.clone(), one.clone()], vec![one.neg(), zero]]);
        assert!(w.matches_exterior && w.generators_match && w.graded_commutative && w.identifications_inverse);
    }

    #[test]
    fn wedge_with_unit_and_overflow() {
        let dr = derived_restriction(&running()).unwrap();
        let tors = tor_modules(&dr).unwrap();
        let w = tor_wedge_product(&dr, &tors, 1, 1).unwrap();
        assert!(w.table[0][0].is_zero() && w.matches_exterior);
        let u = tor_wedge_product(&dr, &tors, 0, 1).unwrap();
        assert!(u.matches_exterior && u.generators_match);
    }

    #[test]
    fn t_module_is_killed_by_x() {
        let dr = derived_restriction(&running()).unwrap();
        let m: ModulePresentation = dr.t_module(2);
        assert_eq!(m.relations().cols(), 2);
    }
}
