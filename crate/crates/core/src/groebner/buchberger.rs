//! Buchberger's algorithm for submodules of `R^m` with optional cofactor
//! tracking.

use std::collections::{BTreeSet, HashSet};

use super::matrix::FreeModuleElem;
use super::order::ModuleOrder;
use super::{audit_record, degree_cap};
use crate::error::{Error, Result};
use crate::polyring::{same_ring, Coeff, Monomial, Polynomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lead {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: Coeff,
}

pub(crate) fn lead_of(v: &FreeModuleElem, ord: &ModuleOrder) -> Option<Lead> {
    let mut best: Option<(usize, &Monomial, &Coeff)> = None;
    for (i, p) in v.comps.iter().enumerate() {
        if let Some((m, c)) = p.leading_term() {
            let better = match best {
                None => true,
                Some((bi, bm, _)) => ord.compare(i, m, bi, bm) == std::cmp::Ordering::Greater,
            };
            if better {
                best = Some((i, m, c));
            }
        }
    }
    best.map(|(pos, m, c)| Lead { pos, mono: m.clone(), coeff: c.clone() })
}

/// `v -= c·m·g`.
pub(crate) fn sub_scaled(v: &mut FreeModuleElem, m: &Monomial, c: &Coeff, g: &FreeModuleElem) {
    for (a, b) in v.comps.iter_mut().zip(&g.comps) {
        if !b.is_zero() {
            *a = &*a - &b.mul_term(m, c);
        }
    }
}

fn scale_term(v: &FreeModuleElem, m: &Monomial, c: &Coeff) -> FreeModuleElem {
    FreeModuleElem { ring: v.ring.clone(), comps: v.comps.iter().map(|p| p.mul_term(m, c)).collect() }
}

fn sugar_of(v: &FreeModuleElem) -> u32 {
    v.comps.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0)
}

/// A list of vectors with cached leading terms, used as a divisor set.
pub(crate) struct Reducer<'a> {
    pub vecs: &'a [FreeModuleElem],
    pub leads: &'a [Lead],
    pub ord: &'a ModuleOrder,
    pub skip: Option<usize>,
}

impl Reducer<'_> {
    fn find(&self, pos: usize, mono: &Monomial) -> Option<usize> {
        self.leads
            .iter()
            .enumerate()
            .find(|(k, l)| Some(*k) != self.skip && l.pos == pos && l.mono.divides(mono))
            .map(|(k, _)| k)
    }

    /// Reduces `v`; `step(k, m, c)` is called for every subtraction of
    /// `c·m·vecs[k]`. With `full` set the tail is reduced too.
    pub fn reduce<F: FnMut(usize, &Monomial, &Coeff)>(
        &self,
        mut v: FreeModuleElem,
        full: bool,
        mut step: F,
    ) -> FreeModuleElem {
        let ring = v.ring.clone();
        let mut rem: Vec<Polynomial> = vec![ring.zero(); v.comps.len()];
        loop {
            let Some(l) = lead_of(&v, self.ord) else { break };
            match self.find(l.pos, &l.mono) {
                Some(k) => {
                    let g = &self.leads[k];
                    let m = g.mono.quotient_of(&l.mono).expect("divides");
                    let c = &l.coeff * &g.coeff.inv().expect("nonzero lead");
                    sub_scaled(&mut v, &m, &c, &self.vecs[k]);
                    step(k, &m, &c);
                }
                None => {
                    if !full {
                        for (r, p) in rem.iter_mut().zip(v.comps.drain(..)) {
                            *r = &*r + &p;
                        }
                        return FreeModuleElem { ring, comps: rem };
                    }
                    let (m, c) = v.comps[l.pos].pop_leading().expect("lead exists");
                    rem[l.pos].push_smallest(m, c);
                }
            }
        }
        FreeModuleElem { ring, comps: rem }
    }
}

/// A Gröbner basis of a submodule of `R^rank`. When built with tracking,
/// `tags[k]` expresses element `k` in the original generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    rank: usize,
    order: ModuleOrder,
    elems: Vec<FreeModuleElem>,
    leads: Vec<Lead>,
    tags: Option<Vec<FreeModuleElem>>,
    sources: usize,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn generators(&self) -> &[FreeModuleElem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Number of generators the basis was computed from.
    pub fn source_count(&self) -> usize {
        self.sources
    }

    /// Cofactors: `generators()[k] = Σ_i tags[k][i]·source_i`.
    pub fn tags(&self) -> Option<&[FreeModuleElem]> {
        self.tags.as_deref()
    }

    pub(crate) fn leads(&self) -> &[Lead] {
        &self.leads
    }

    pub(crate) fn reducer(&self) -> Reducer<'_> {
        Reducer { vecs: &self.elems, leads: &self.leads, ord: &self.order, skip: None }
    }

    /// Leading term of each generator as `(position, exponents)`.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.leads.iter().map(|l| (l.pos, l.mono.clone())).collect()
    }

    /// S-vector of two elements with the same leading position.
    pub(crate) fn s_vector(&self, i: usize, j: usize) -> Option<FreeModuleElem> {
        s_vector(&self.elems, &self.leads, i, j).map(|(s, ..)| s)
    }

    /// Checks that every S-vector reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let red = self.reducer();
        for j in 0..self.elems.len() {
            for i in 0..j {
                if let Some(s) = self.s_vector(i, j) {
                    if !red.reduce(s, false, |_, _, _| {}).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True when no term of any generator is divisible by another leading term.
    pub fn check_reduced(&self) -> bool {
        for (k, v) in self.elems.iter().enumerate() {
            for (pos, p) in v.comps.iter().enumerate() {
                for (m, _) in p.terms() {
                    let hit = self
                        .leads
                        .iter()
                        .enumerate()
                        .any(|(j, l)| j != k && l.pos == pos && l.mono.divides(m));
                    if hit {
                        return false;
                    }
                }
            }
        }
        self.leads.iter().all(|l| l.coeff.is_one())
    }
}

/// `(S-vector, a_i, m_i, a_j, m_j)` with `S = a_i·m_i·g_i − a_j·m_j·g_j`.
#[allow(clippy::type_complexity)]
pub(crate) fn s_vector(
    elems: &[FreeModuleElem],
    leads: &[Lead],
    i: usize,
    j: usize,
) -> Option<(FreeModuleElem, Coeff, Monomial, Coeff, Monomial)> {
    let (li, lj) = (&leads[i], &leads[j]);
    if li.pos != lj.pos {
        return None;
    }
    let l = li.mono.lcm(&lj.mono);
    let mi = li.mono.quotient_of(&l).expect("lcm");
    let mj = lj.mono.quotient_of(&l).expect("lcm");
    let ai = li.coeff.inv().expect("lead");
    let aj = lj.coeff.inv().expect("lead");
    let mut s = scale_term(&elems[i], &mi, &ai);
    sub_scaled(&mut s, &mj, &aj, &elems[j]);
    Some((s, ai, mi, aj, mj))
}

struct Pending {
    queue: BTreeSet<(u32, u32, usize, usize)>,
    live: HashSet<(usize, usize)>,
}

impl Pending {
    fn contains(&self, a: usize, b: usize) -> bool {
        self.live.contains(&(a.min(b), a.max(b)))
    }
}

/// Runs Buchberger. Inputs must already live in `ring`, whose order kind
/// matches `ord.kind`.
pub(crate) fn buchberger(
    ring: &Ring,
    rank: usize,
    inputs: &[FreeModuleElem],
    ord: &ModuleOrder,
    track: bool,
) -> Result<GroebnerBasis> {
    debug_assert_eq!(ring.order(), ord.kind);
    let s = inputs.len();
    let mut elems: Vec<FreeModuleElem> = Vec::new();
    let mut leads: Vec<Lead> = Vec::new();
    let mut tags: Vec<FreeModuleElem> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut pending = Pending { queue: BTreeSet::new(), live: HashSet::new() };
    let ideal = rank == 1;
    let cap = degree_cap();

    let push = |v: FreeModuleElem,
                tag: FreeModuleElem,
                sg: u32,
                elems: &mut Vec<FreeModuleElem>,
                leads: &mut Vec<Lead>,
                tags: &mut Vec<FreeModuleElem>,
                sugar: &mut Vec<u32>,
                pending: &mut Pending| {
        let l = lead_of(&v, ord).expect("nonzero");
        let n = elems.len();
        for k in 0..n {
            if leads[k].pos != l.pos {
                continue;
            }
            let lcm = leads[k].mono.lcm(&l.mono);
            let d = lcm.degree();
            let sk = sugar[k] + d - leads[k].mono.degree();
            let sn = sg + d - l.mono.degree();
            pending.queue.insert((sk.max(sn), d, n, k));
            pending.live.insert((k, n));
        }
        elems.push(v);
        leads.push(l);
        if track {
            tags.push(tag);
        }
        sugar.push(sg);
    };

    for (i, g) in inputs.iter().enumerate() {
        if g.len() != rank {
            return Err(Error::Shape(format!("generator {i} has length {} in rank {rank}", g.len())));
        }
        if !same_ring(g.ring(), ring) {
            return Err(Error::RingMismatch);
        }
        if g.is_zero() || elems.contains(g) {
            continue;
        }
        let tag = if track { FreeModuleElem::basis(ring, s, i) } else { FreeModuleElem::zero(ring, 0) };
        push(g.clone(), tag, sugar_of(g), &mut elems, &mut leads, &mut tags, &mut sugar, &mut pending);
    }

    while let Some(key) = pending.queue.pop_first() {
        let (sg, deg, j, i) = key;
        pending.live.remove(&(i, j));
        if ideal && leads[i].mono.is_coprime(&leads[j].mono) {
            continue;
        }
        let lcm = leads[i].mono.lcm(&leads[j].mono);
        let chain = (0..elems.len()).any(|k| {
            k != i
                && k != j
                && leads[k].pos == leads[i].pos
                && leads[k].mono.divides(&lcm)
                && !pending.contains(i, k)
                && !pending.contains(j, k)
        });
        if chain {
            continue;
        }
        if let Some(c) = cap {
            if deg > c {
                return Err(Error::DegreeCap { cap: c, degree: deg });
            }
        }
        let (sv, ai, mi, aj, mj) = s_vector(&elems, &leads, i, j).expect("same position");
        let mut tag = FreeModuleElem::zero(ring, if track { s } else { 0 });
        if track {
            tag = scale_term(&tags[i], &mi, &ai);
            sub_scaled(&mut tag, &mj, &aj, &tags[j]);
        }
        let red = Reducer { vecs: &elems, leads: &leads, ord, skip: None };
        let tag_src = &tags;
        let h = red.reduce(sv, true, |k, m, c| {
            if track {
                sub_scaled(&mut tag, m, c, &tag_src[k]);
            }
        });
        if !h.is_zero() {
            push(h, tag, sg, &mut elems, &mut leads, &mut tags, &mut sugar, &mut pending);
        }
    }

    // minimal basis: drop elements whose lead is divisible by another lead
    let n = elems.len();
    let keep: Vec<usize> = (0..n)
        .filter(|&a| {
            !(0..n).any(|b| {
                b != a
                    && leads[b].pos == leads[a].pos
                    && leads[b].mono.divides(&leads[a].mono)
                    && (leads[b].mono != leads[a].mono || b < a)
            })
        })
        .collect();
    let mut melems: Vec<FreeModuleElem> = keep.iter().map(|&k| elems[k].clone()).collect();
    let mleads: Vec<Lead> = keep.iter().map(|&k| leads[k].clone()).collect();
    let mut mtags: Vec<FreeModuleElem> = if track { keep.iter().map(|&k| tags[k].clone()).collect() } else { Vec::new() };

    // interreduce tails against the minimal basis
    for a in 0..melems.len() {
        let red = Reducer { vecs: &melems, leads: &mleads, ord, skip: Some(a) };
        let mut tag = if track { mtags[a].clone() } else { FreeModuleElem::zero(ring, 0) };
        let tag_src = &mtags;
        let r = red.reduce(melems[a].clone(), true, |k, m, c| {
            if track {
                sub_scaled(&mut tag, m, c, &tag_src[k]);
            }
        });
        melems[a] = r;
        if track {
            mtags[a] = tag;
        }
    }

    // monic, then sorted ascending by leading term
    let mut order: Vec<usize> = (0..melems.len()).collect();
    order.sort_by(|&a, &b| ord.compare(mleads[a].pos, &mleads[a].mono, mleads[b].pos, &mleads[b].mono));
    let mut out_elems = Vec::with_capacity(order.len());
    let mut out_leads = Vec::with_capacity(order.len());
    let mut out_tags = Vec::with_capacity(order.len());
    let one = Monomial::one(ring.arity());
    for &k in &order {
        let inv = mleads[k].coeff.inv().expect("lead");
        out_elems.push(scale_term(&melems[k], &one, &inv));
        out_leads.push(Lead { pos: mleads[k].pos, mono: mleads[k].mono.clone(), coeff: ring.field().one() });
        if track {
            out_tags.push(scale_term(&mtags[k], &one, &inv));
        }
    }
    let gb = GroebnerBasis {
        ring: ring.clone(),
        rank,
        order: ord.clone(),
        elems: out_elems,
        leads: out_leads,
        tags: if track { Some(out_tags) } else { None },
        sources: s,
        reduced: true,
    };
    audit_record(&gb);
    Ok(gb)
}
