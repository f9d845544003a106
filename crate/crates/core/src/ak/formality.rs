use std::collections::BTreeMap;

use serde::Serialize;

use super::restrict::{restrict_ak, RestrictedAK};
use super::{leray_filtration, QuantizedCycle};
use crate::cycles::{verify_splitting, ExcessSequence, SplittingWitness};
use crate::error::{Error, Result};
use crate::groebner::{lift_columns, span_contains, PolyMatrix};
use crate::homalg::{check_presented_map, ChainComplex, ChainMap, PresentedMapCheck, QuasiIsoReport};
use crate::koszul::{binomial, DerivedRestriction, ExteriorBasis};

/// `𝔰(E) = ⊕ Λ^k E [k]` over `O_Y`, each term killed by `x̲`, on the same
/// degree range as the derived restriction.
pub fn excess_complex(dr: &DerivedRestriction) -> ChainComplex {
    let ring = dr.ring();
    let c = dr.codim();
    let r = dr.pair().excess_rank();
    let ranks: Vec<usize> = (0..=c).rev().map(|k| binomial(r, k)).collect();
    let diffs = (1..=c).rev().map(|k| PolyMatrix::zeros(ring, binomial(r, k - 1), binomial(r, k))).collect();
    let rels = ranks.iter().map(|&n| dr.t_module(n).relations().clone()).collect();
    ChainComplex::new(ring, -(c as i32), ranks, diffs).with_term_relations(rels).expect("shapes")
}

/// `Θ = q ∘ Ψ` with the intermediate data.
#[derive(Clone, Debug)]
pub struct PsiTheta {
    /// The retraction used, in the canonical `dx̲, dt̲` coordinates.
    pub rho: PolyMatrix,
    pub theta: ChainMap,
    pub theta_defect: Option<i32>,
    pub theta_report: QuasiIsoReport,
    pub restricted: RestrictedAK,
    /// Koszul terms into `(P_τ)|_Y`, `e_S ↦ (0, e_S)`.
    pub psi: ChainMap,
    /// `(P_τ)|_Y → 𝔰(E)`, `(a, b) ↦ Λ^k ρ(b)`.
    pub q: ChainMap,
    pub psi_is_chain_map: bool,
    pub q_is_chain_map: bool,
    /// `q ∘ Ψ = Θ` modulo the relations of `𝔰(E)`.
    pub factorization: bool,
    /// `⊕ F_1(Λ^k N̂)[k] → (P_τ)|_Y` over `O_T`, with all of `Λ⁰` in degree 0.
    pub filtration: ChainMap,
    pub filtration_report: QuasiIsoReport,
    /// Degrees in which the inclusion of `F_1` (killed by `x̲`) is a
    /// well-defined map over `O_Y`.
    pub filtration_linear_over_y: Vec<(i32, bool)>,
}

impl PsiTheta {
    pub fn verdict(&self) -> bool {
        self.theta_defect.is_none()
            && self.theta_report.quasi_isomorphism
            && self.psi_is_chain_map
            && self.q_is_chain_map
            && self.factorization
            && self.filtration_report.quasi_isomorphism
            && self.restricted.holds()
    }
}

/// Builds `Θ` from a splitting of the excess sequence and verifies it is a
/// quasi-isomorphism by acyclicity of its cone.
pub fn psi_theta(dr: &DerivedRestriction, ses: &ExcessSequence, w: &SplittingWitness) -> Result<PsiTheta> {
    if !verify_splitting(ses, w) {
        return Err(Error::Invariant("the witness does not split the excess sequence".into()));
    }
    let pair = dr.pair();
    let ring = dr.ring();
    let rho = ses.canonical_retraction(&w.retraction);
    let c = dr.codim();
    let target = excess_complex(dr);

    let mut theta_comps = BTreeMap::new();
    let mut psi_comps = BTreeMap::new();
    let mut q_comps = BTreeMap::new();
    let restricted = restrict_ak(&QuantizedCycle::canonical(pair), pair)?;
    for k in 0..=c {
        let deg = -(k as i32);
        let wedge_rho = dr.wedge_retraction(&rho, k)?;
        theta_comps.insert(deg, wedge_rho.clone());
        let top = restricted.basis_ty.dim(k + 1);
        let n = top + restricted.basis_hat.dim(k);
        let mut psi = PolyMatrix::zeros(ring, n, dr.basis().dim(k));
        psi.paste(top, 0, &PolyMatrix::identity(ring, dr.basis().dim(k)));
        psi_comps.insert(deg, psi);
        let mut q = PolyMatrix::zeros(ring, wedge_rho.rows(), n);
        q.paste(0, top, &wedge_rho);
        q_comps.insert(deg, q);
    }
    let theta = ChainMap::new(dr.complex(), &target, theta_comps)?;
    let psi = ChainMap::new(dr.complex(), &restricted.over_y, psi_comps)?;
    let q = ChainMap::new(&restricted.over_y, &target, q_comps)?;
    let theta_defect = theta.chain_law_defect();
    let theta_report = theta.is_quasi_iso()?;
    let composite = psi.then(&q)?;
    let mut factorization = true;
    for deg in -(c as i32)..=0 {
        let diff = composite.component(deg).sub(&theta.component(deg));
        factorization &= span_contains(&target.relations(deg), &diff)?;
    }

    // F_1 pieces over O_T, and their O_Y-linearity
    let rt = pair.ring_t();
    let mut src_ranks = Vec::new();
    let mut incl = BTreeMap::new();
    let mut filtration_linear_over_y = Vec::new();
    for k in (0..=c).rev() {
        let deg = -(k as i32);
        let top = restricted.basis_ty.dim(k + 1);
        let dim = restricted.basis_hat.dim(k);
        let inner = if k == 0 {
            PolyMatrix::identity(&rt, 1)
        } else {
            leray_filtration(pair, k, 1)?.inclusion(&rt, dim)
        };
        let mut m = PolyMatrix::zeros(&rt, top + dim, inner.cols());
        m.paste(top, 0, &inner);
        src_ranks.push(inner.cols());
        let m_y = m.embed_into(ring)?;
        let src = dr.t_module(inner.cols());
        let ok = check_presented_map(&m_y, &src, &restricted.over_y.term(deg))?.well_defined;
        filtration_linear_over_y.push((deg, ok));
        incl.insert(deg, m);
    }
    let src_diffs = (1..=c).rev().map(|k| PolyMatrix::zeros(&rt, src_ranks[c - k + 1], src_ranks[c - k])).collect();
    let f1 = ChainComplex::new(&rt, -(c as i32), src_ranks, src_diffs);
    let filtration = ChainMap::new(&f1, &restricted.over_t, incl)?;
    let filtration_report = filtration.is_quasi_iso()?;

    Ok(PsiTheta {
        rho,
        psi_is_chain_map: psi.is_chain_map(),
        q_is_chain_map: q.is_chain_map(),
        theta,
        theta_defect,
        theta_report,
        restricted,
        psi,
        q,
        factorization,
        filtration,
        filtration_report,
        filtration_linear_over_y,
    })
}

/// The degree `−1` part of `Ψ`: `dt̲`-coefficients modulo `x̲`.
#[derive(Clone, Debug, Serialize)]
pub struct AtiyahMorphism {
    /// `r × c` over `O_Y`.
    #[serde(skip)]
    pub matrix: PolyMatrix,
    /// `H^{-1} → E` on the homology presentation.
    pub on_homology: PresentedMapCheck,
}

pub fn atiyah_morphism(dr: &DerivedRestriction) -> Result<AtiyahMorphism> {
    let ring = dr.ring();
    let b = dr.pair().blocks();
    let c = dr.codim();
    let mut matrix = PolyMatrix::zeros(ring, b.r, c);
    for j in 0..b.r {
        matrix.set(j, b.p + j, ring.one());
    }
    if c == 0 {
        let check = PresentedMapCheck { well_defined: true, injective: true, surjective: true, witness: None };
        return Ok(AtiyahMorphism { matrix, on_homology: check });
    }
    let h = dr.complex().homology(-1)?;
    let on_cycles = matrix.mul(&h.cycle_basis);
    let on_homology = check_presented_map(&on_cycles, &h.presentation, &dr.t_module(b.r))?;
    Ok(AtiyahMorphism { matrix, on_homology })
}

impl AtiyahMorphism {
    /// `Θ_{-1}` and the Atiyah morphism agree on every cycle, modulo `x̲`.
    pub fn agrees_with(&self, dr: &DerivedRestriction, theta: &ChainMap) -> Result<bool> {
        if dr.codim() == 0 {
            return Ok(true);
        }
        let z = dr.complex().cycles(-1)?;
        let diff = theta.component(-1).sub(&self.matrix).mul(&z);
        span_contains(dr.t_module(self.matrix.rows()).relations(), &diff)
    }
}

/// The retraction read off a formality isomorphism, with the checks of the
/// two commuting squares.
#[derive(Clone, Debug)]
pub struct ExtractedSplitting {
    /// In the basis of the given sequence.
    pub witness: SplittingWitness,
    /// In the canonical `dx̲, dt̲` coordinates.
    pub rho_canonical: PolyMatrix,
    /// `β₀(1)` before normalization.
    pub unit: String,
    /// `H^{-1}(𝔫) : E ⊕ E ⊕ N*_{T/Y} → E ⊕ N̂*` over `O_T`.
    pub n_matrix: PolyMatrix,
    pub classes_are_cycles: bool,
    pub boundaries_killed: bool,
    /// `(0, id, 0) ↦ (id, α)`.
    pub square_one: bool,
    /// `(id, 0, 0) ↦ (id, 0)`.
    pub square_two: bool,
    pub rho_alpha_is_identity: bool,
}

impl ExtractedSplitting {
    pub fn holds(&self) -> bool {
        self.classes_are_cycles && self.boundaries_killed && self.square_one && self.square_two && self.rho_alpha_is_identity
    }
}

/// Reads a splitting of the excess sequence off a quasi-isomorphism
/// `β : K ⊗ O_Y → 𝔰(E)`.
pub fn extract_splitting_from_formality(dr: &DerivedRestriction, ses: &ExcessSequence, beta: &ChainMap) -> Result<ExtractedSplitting> {
    let pair = dr.pair();
    let ring = dr.ring();
    let rt = pair.ring_t();
    let b = pair.blocks();
    let (p, r, c) = (b.p, b.r, dr.codim());
    if beta.source().ranks() != dr.complex().ranks() || beta.source().lo() != dr.complex().lo() {
        return Err(Error::Shape("β must start at the derived restriction".into()));
    }
    for k in 0..=c.min(1) {
        if beta.target().rank(-(k as i32)) != binomial(r, k) {
            return Err(Error::Shape("β must land in 𝔰(E)".into()));
        }
    }

    // normalize: H⁰(β) = 𝔭, H^{-1}(β) = 𝔞𝔱
    let u = beta.component(0).get(0, 0).restrict_to(&rt)?;
    if !u.is_unit() {
        return Err(Error::Invariant(format!("H^0(β) is not an isomorphism: β₀(1) = {u}")));
    }
    let beta1 = if c > 0 { beta.component(-1).restrict_to(&rt)? } else { PolyMatrix::zeros(&rt, 0, 0) };
    let b_t = beta1.select_columns(&(p..c).collect::<Vec<_>>());
    let correction = if r == 0 {
        PolyMatrix::zeros(&rt, 0, 0)
    } else {
        match lift_columns(&b_t, &PolyMatrix::identity(&rt, r)) {
            Ok(inv) if b_t.mul(&inv) == PolyMatrix::identity(&rt, r) => inv,
            _ => return Err(Error::Invariant("H^{-1}(β) is not an isomorphism onto E".into())),
        }
    };
    let beta1 = correction.mul(&beta1);

    // F ⊗ F as the Koszul complex on (x̲, 0, x̲, 0) with generators f, g
    let labels: Vec<String> = (1..=c).map(|i| format!("f{i}")).chain((1..=c).map(|i| format!("g{i}"))).collect();
    let doubled = ExteriorBasis::new(&labels);
    let seq: Vec<_> = (0..2 * c).map(|i| if i % c < p { ring.variable(i % c) } else { ring.zero() }).collect();
    let d1 = doubled.contraction_matrix(ring, &seq, 1);
    let d2 = if c > 0 { doubled.contraction_matrix(ring, &seq, 2) } else { PolyMatrix::zeros(ring, 0, 0) };

    // classes: f_{t_b}, g_{t_b}, g_{x_a} − f_{x_a}
    let mut classes = PolyMatrix::zeros(ring, 2 * c, 2 * r + p);
    for j in 0..r {
        classes.set(p + j, j, ring.one());
        classes.set(c + p + j, r + j, ring.one());
    }
    for a in 0..p {
        classes.set(c + a, 2 * r + a, ring.one());
        classes.set(a, 2 * r + a, ring.from_i64(-1));
    }
    let classes_are_cycles = d1.mul(&classes).is_zero();

    // u·f_a + v·g_a = (u + v)·f_a + v·h_a with h = g − f; read the E part
    // through β and the N̂* part as the coefficient of 1 ⊗ h
    let mut proj = PolyMatrix::zeros(&rt, r + c, 2 * c);
    proj.paste(0, 0, &beta1);
    proj.paste(0, c, &beta1);
    proj.paste(r, c, &PolyMatrix::identity(&rt, c));
    let boundaries_killed = c == 0 || proj.mul(&d2.restrict_to(&rt)?).is_zero();
    let n_matrix = proj.mul(&classes.restrict_to(&rt)?);

    let alpha = crate::cycles::excess_sequence(pair).alpha().clone();
    let id_r = PolyMatrix::identity(&rt, r);
    let square_one = n_matrix.submatrix(0..r + c, r..2 * r) == id_r.vstack(&alpha);
    let square_two = n_matrix.submatrix(0..r + c, 0..r) == id_r.vstack(&PolyMatrix::zeros(&rt, c, r));

    let composite = n_matrix.submatrix(r..r + c, r..2 * r + p);
    let inverse = match lift_columns(&composite, &PolyMatrix::identity(&rt, c)) {
        Ok(inv) if composite.mul(&inv) == PolyMatrix::identity(&rt, c) && inv.mul(&composite) == PolyMatrix::identity(&rt, c) => inv,
        _ => return Err(Error::Invariant(format!("E ⊕ N*_{{T/Y}} → N̂* is not invertible: {composite:?}"))),
    };
    let rho_canonical = inverse.submatrix(0..r, 0..c);
    let section_canonical = inverse_section(&rt, &inverse, r, p, c);
    let rho_alpha_is_identity = rho_canonical.mul(&alpha) == id_r;

    let (g, g_inv) = ses.change_of_basis();
    let witness = SplittingWitness { section: g.mul(&section_canonical), retraction: rho_canonical.mul(g_inv) };
    if !verify_splitting(ses, &witness) {
        return Err(Error::Invariant("the extracted splitting fails on the given sequence".into()));
    }
    Ok(ExtractedSplitting {
        witness,
        rho_canonical,
        unit: u.to_string(),
        n_matrix,
        classes_are_cycles,
        boundaries_killed,
        square_one,
        square_two,
        rho_alpha_is_identity,
    })
}

/// The section of `π` complementary to `ρ`: the `N*_{T/Y}` columns of the
/// composite `E ⊕ N*_{T/Y} → N̂*`.
fn inverse_section(rt: &crate::polyring::Ring, inverse: &PolyMatrix, r: usize, p: usize, c: usize) -> PolyMatrix {
    let _ = rt;
    // inverse: N̂* → E ⊕ N*_{T/Y}; its inverse has the section as last p columns
    let forward = lift_columns(inverse, &PolyMatrix::identity(inverse.ring(), c)).expect("invertible");
    forward.submatrix(0..c, r..r + p)
}
