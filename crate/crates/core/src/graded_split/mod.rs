//! Sums of line bundles on projective space as graded free modules, graded
//! maps between them, and certificates that a surjection has no section.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{ideal_basis, ring_like, PolyMatrix};
use crate::koszul::{binomial, determinant, ExteriorBasis};
use crate::polyring::{Coeff, Field, Monomial, OrderKind, PolyRing, Polynomial, Ring};

/// `O(a₁) ⊕ … ⊕ O(a_m)` on `Pⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundleSum {
    pub n: usize,
    pub twists: Vec<i64>,
}

impl LineBundleSum {
    pub fn new(n: usize, twists: Vec<i64>) -> LineBundleSum {
        LineBundleSum { n, twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }
}

/// Homogeneous coordinates of `Pⁿ`: `s, t` on the line, `x0..xn` otherwise.
pub fn default_variables(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["s".into(), "t".into()]
    } else {
        (0..=n).map(|i| format!("x{i}")).collect()
    }
}

pub fn projective_ring(n: usize, field: Field) -> Ring {
    PolyRing::new(&default_variables(n), field, OrderKind::Degrevlex).expect("distinct names")
}

/// All monomials of total degree `d` in `arity` variables, in descending
/// lexicographic exponent order.
pub fn monomials_of_degree(arity: usize, d: u32) -> Vec<Monomial> {
    fn go(arity: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == arity {
            prefix.push(d);
            out.push(Monomial::from_exponents(prefix));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(arity, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    go(arity, d, &mut Vec::new(), &mut out);
    out
}

/// A map `A → B`; entry `(i, j)` is a form of degree `b_i − a_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBundleMap {
    pub source: LineBundleSum,
    pub target: LineBundleSum,
    pub matrix: PolyMatrix,
}

impl GradedBundleMap {
    pub fn new(source: LineBundleSum, target: LineBundleSum, matrix: PolyMatrix) -> Result<GradedBundleMap> {
        if source.n != target.n {
            return Err(Error::ArityMismatch { left: source.n, right: target.n });
        }
        if matrix.ring().arity() != source.n + 1 {
            return Err(Error::ArityMismatch { left: matrix.ring().arity(), right: source.n + 1 });
        }
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, bundles have ranks {} and {}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let f = matrix.get(i, j);
                let d = target.twists[i] - source.twists[j];
                if f.is_zero() {
                    continue;
                }
                if d < 0 || !f.is_homogeneous() || f.total_degree() != Some(d as u32) {
                    return Err(Error::Degenerate(format!("entry ({i}, {j}) = {f} is not a form of degree {d}")));
                }
            }
        }
        Ok(GradedBundleMap { source, target, matrix })
    }

    pub fn ring(&self) -> &Ring {
        self.matrix.ring()
    }

    pub fn compose(&self, after: &GradedBundleMap) -> Result<GradedBundleMap> {
        GradedBundleMap::new(self.source.clone(), after.target.clone(), after.matrix.try_mul(&self.matrix)?)
    }
}

/// `Σ_{i,j} C(n + b_i − a_j, n)` over nonnegative degrees.
pub fn hom_dimension(a: &LineBundleSum, b: &LineBundleSum) -> usize {
    let mut dim = 0;
    for &bi in &b.twists {
        for &aj in &a.twists {
            let d = bi - aj;
            if d >= 0 {
                dim += binomial(a.n + d as usize, a.n);
            }
        }
    }
    dim
}

/// Monomial matrices spanning `Hom(A, B)`.
pub fn graded_hom_basis(ring: &Ring, a: &LineBundleSum, b: &LineBundleSum) -> Result<Vec<GradedBundleMap>> {
    if a.n != b.n {
        return Err(Error::ArityMismatch { left: a.n, right: b.n });
    }
    let mut out = Vec::new();
    for i in 0..b.rank() {
        for j in 0..a.rank() {
            let d = b.twists[i] - a.twists[j];
            if d < 0 {
                continue;
            }
            for m in monomials_of_degree(ring.arity(), d as u32) {
                let mut mat = PolyMatrix::zeros(ring, b.rank(), a.rank());
                mat.set(i, j, ring.monomial(m, ring.field().one()));
                out.push(GradedBundleMap::new(a.clone(), b.clone(), mat)?);
            }
        }
    }
    Ok(out)
}

/// The system `π∘s = id` on the coefficients of `s` in the monomial basis
/// of `Hom(B, A)`, and why it has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonSplitCertificate {
    pub source: LineBundleSum,
    pub target: LineBundleSum,
    pub surjection: Vec<Vec<String>>,
    /// Dimension of the space of candidate sections.
    pub unknowns: usize,
    /// One equation per target entry and monomial.
    pub equations: usize,
    pub rank_matrix: usize,
    pub rank_augmented: usize,
    /// Dimension of the solution space of the homogeneous system.
    pub kernel_dimension: usize,
    /// An equation `0 = 1` in the reduced system: the entry and monomial
    /// whose coefficient cannot be matched.
    pub inconsistent_equation: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionOutcome {
    Section(GradedBundleMap),
    NonSplit(NonSplitCertificate),
}

fn matrix_strings(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|f| f.to_string()).collect()).collect()
}

/// The maximal minors of `π` cut out the empty set in `Pⁿ`; on failure,
/// names a coordinate outside the radical of the minor ideal.
pub fn check_surjective(pi: &GradedBundleMap) -> Result<()> {
    let ring = pi.ring();
    let m = pi.target.rank();
    let cols = pi.source.rank();
    if m == 0 {
        return Ok(());
    }
    let labels: Vec<String> = (0..cols).map(|j| j.to_string()).collect();
    let basis = ExteriorBasis::new(&labels);
    let rows: Vec<usize> = (0..m).collect();
    let minors: Vec<Polynomial> = basis
        .subsets(m)
        .iter()
        .map(|s| determinant(ring, &pi.matrix.select_rows(&rows).select_columns(s)))
        .filter(|f| !f.is_zero())
        .collect();
    // Rabinowitsch: x_i ∈ √I  ⟺  1 ∈ I + (1 − u·x_i)
    let mut names: Vec<String> = ring.vars().to_vec();
    names.push("u_".into());
    let ext = ring_like(ring, &names)?;
    let u = ext.variable(ring.arity());
    for i in 0..ring.arity() {
        let mut gens: Vec<Polynomial> = minors.iter().map(|f| f.embed_into(&ext)).collect::<Result<_>>()?;
        gens.push(&ext.one() - &(&u * &ext.variable(i)));
        let gb = ideal_basis(&ext, &gens)?;
        if !gb.generators().iter().any(|g| g.get(0).is_constant() && !g.get(0).is_zero()) {
            let shown: Vec<String> = minors.iter().map(|f| f.to_string()).collect();
            return Err(Error::Degenerate(format!(
                "not surjective: {} is not in the radical of the maximal minors [{}]",
                ring.vars()[i],
                shown.join(", ")
            )));
        }
    }
    Ok(())
}

struct Solved {
    rank_matrix: usize,
    rank_augmented: usize,
    solution: Option<Vec<Coeff>>,
    /// Row of the reduced augmented matrix reading `0 = c ≠ 0`.
    bad_row: Option<usize>,
}

/// Gauss–Jordan on `[A | b]` over the field.
fn solve(field: Field, a: &[Vec<Coeff>], b: &[Coeff], unknowns: usize) -> Solved {
    let mut m: Vec<Vec<Coeff>> = a.iter().zip(b).map(|(row, rhs)| [row.clone(), vec![rhs.clone()]].concat()).collect();
    let mut origin: Vec<usize> = (0..m.len()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        origin.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=unknowns {
                    let v = &m[i][j] - &(&f * &m[r][j]);
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let bad = (r..m.len()).find(|&i| !m[i][unknowns].is_zero());
    let rank_augmented = r + usize::from(bad.is_some());
    let solution = if bad.is_some() {
        None
    } else {
        let mut x = vec![field.zero(); unknowns];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = m[i][unknowns].clone();
        }
        Some(x)
    };
    Solved { rank_matrix: r, rank_augmented, solution, bad_row: bad.map(|i| origin[i]) }
}

/// Solves `π∘s = id_B` degreewise, after checking `π` is surjective.
pub fn find_graded_section(pi: &GradedBundleMap) -> Result<SectionOutcome> {
    check_surjective(pi)?;
    let ring = pi.ring();
    let field = ring.field();
    let (a, b) = (&pi.source, &pi.target);
    let basis = graded_hom_basis(ring, b, a)?;
    let products: Vec<PolyMatrix> = basis.iter().map(|s| pi.matrix.mul(&s.matrix)).collect();

    // equations: entry (i, i'), monomial of degree b_i − b_{i'}
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..b.rank() {
        for k in 0..b.rank() {
            let d = b.twists[i] - b.twists[k];
            if d < 0 {
                continue;
            }
            for mono in monomials_of_degree(ring.arity(), d as u32) {
                let row: Vec<Coeff> = products.iter().map(|p| coefficient(p.get(i, k), &mono, field)).collect();
                let target = if i == k && d == 0 { field.one() } else { field.zero() };
                labels.push(format!("entry ({i}, {k}), coefficient of {}", ring.monomial(mono.clone(), field.one())));
                rows.push(row);
                rhs.push(target);
            }
        }
    }
    let unknowns = basis.len();
    let solved = solve(field, &rows, &rhs, unknowns);
    match solved.solution {
        Some(x) => {
            let mut s = PolyMatrix::zeros(ring, a.rank(), b.rank());
            for (c, m) in x.iter().zip(&basis) {
                if !c.is_zero() {
                    s = s.add(&m.matrix.scale(&ring.constant(c.clone())));
                }
            }
            let section = GradedBundleMap::new(b.clone(), a.clone(), s)?;
            if pi.matrix.mul(&section.matrix) != PolyMatrix::identity(ring, b.rank()) {
                return Err(Error::Invariant("solved section fails π∘s = id".into()));
            }
            Ok(SectionOutcome::Section(section))
        }
        None => Ok(SectionOutcome::NonSplit(NonSplitCertificate {
            source: a.clone(),
            target: b.clone(),
            surjection: matrix_strings(&pi.matrix),
            unknowns,
            equations: rows.len(),
            rank_matrix: solved.rank_matrix,
            rank_augmented: solved.rank_augmented,
            kernel_dimension: unknowns - solved.rank_matrix,
            inconsistent_equation: labels[solved.bad_row.expect("inconsistent")].clone(),
        })),
    }
}

fn coefficient(f: &Polynomial, m: &Monomial, field: Field) -> Coeff {
    f.terms().iter().find(|(mm, _)| mm == m).map_or(field.zero(), |(_, c)| c.clone())
}

/// `O(−1)^{n+1} → O` on `Pⁿ` by the coordinate forms.
pub fn euler_excess_example(n: usize, field: Field) -> GradedBundleMap {
    assert!(n >= 1, "projective dimension must be positive");
    let ring = projective_ring(n, field);
    let row: Vec<Polynomial> = (0..=n).map(|i| ring.variable(i)).collect();
    let matrix = PolyMatrix::from_rows(&ring, vec![row]).expect("one row");
    GradedBundleMap::new(LineBundleSum::new(n, vec![-1; n + 1]), LineBundleSum::new(n, vec![0]), matrix)
        .expect("coordinate forms have degree one")
}

/// Unipotent automorphism of a line bundle sum with random forms above the
/// diagonal, and its inverse.
pub fn random_automorphism(ring: &Ring, bundle: &LineBundleSum, rng: &mut ChaCha8Rng) -> (PolyMatrix, PolyMatrix) {
    let m = bundle.rank();
    let mut g = PolyMatrix::identity(ring, m);
    for i in 0..m {
        for j in i + 1..m {
            let d = bundle.twists[i] - bundle.twists[j];
            if d < 0 {
                continue;
            }
            let mut f = ring.zero();
            for mono in monomials_of_degree(ring.arity(), d as u32) {
                let c = ring.field().from_i64(rng.gen_range(-2..=2));
                f = &f + &ring.monomial(mono, c);
            }
            g.set(i, j, f);
        }
    }
    // g = I + N with N strictly upper triangular: g⁻¹ = Σ (−N)^k
    let nil = g.sub(&PolyMatrix::identity(ring, m));
    let mut inv = PolyMatrix::identity(ring, m);
    let mut power = PolyMatrix::identity(ring, m);
    for _ in 1..m.max(1) {
        power = power.mul(&nil.neg());
        inv = inv.add(&power);
    }
    (g, inv)
}

/// A split surjection `A = B ⊕ C → B`, conjugated by random automorphisms.
pub fn random_split_surjection(n: usize, seed: u64, field: Field) -> GradedBundleMap {
    let ring = projective_ring(n, field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mb = rng.gen_range(1..=2);
    let mc = rng.gen_range(0..=2);
    let target: Vec<i64> = (0..mb).map(|_| rng.gen_range(-1..=1)).collect();
    let extra: Vec<i64> = (0..mc).map(|_| rng.gen_range(-2..=1)).collect();
    let source = LineBundleSum::new(n, [target.clone(), extra].concat());
    let target = LineBundleSum::new(n, target);
    let mut proj = PolyMatrix::zeros(&ring, mb, source.rank());
    for i in 0..mb {
        proj.set(i, i, ring.one());
    }
    let (g, _) = random_automorphism(&ring, &source, &mut rng);
    let (h, _) = random_automorphism(&ring, &target, &mut rng);
    GradedBundleMap::new(source, target, h.mul(&proj).mul(&g)).expect("degrees are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Ring {
        projective_ring(1, Field::Rational)
    }

    fn map(ring: &Ring, a: Vec<i64>, b: Vec<i64>, rows: &[&[&str]]) -> GradedBundleMap {
        let n = ring.arity() - 1;
        let m = PolyMatrix::parse(ring, &rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect::<Vec<_>>())
            .unwrap();
        GradedBundleMap::new(LineBundleSum::new(n, a), LineBundleSum::new(n, b), m).unwrap()
    }

    #[test]
    fn hom_dimensions() {
        let r = p1();
        let o = |t: Vec<i64>| LineBundleSum::new(1, t);
        assert_eq!(graded_hom_basis(&r, &o(vec![0]), &o(vec![-1])).unwrap().len(), 0);
        assert_eq!(graded_hom_basis(&r, &o(vec![-1]), &o(vec![2])).unwrap().len(), 4);
        assert_eq!(graded_hom_basis(&r, &o(vec![5]), &o(vec![5])).unwrap().len(), 1);
        assert_eq!(hom_dimension(&o(vec![-1]), &o(vec![2])), 4);
    }

    #[test]
    fn hom_dimension_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for n in 1..=3 {
            let r = projective_ring(n, Field::Rational);
            for _ in 0..10 {
                let a = LineBundleSum::new(n, (0..rng.gen_range(0..3)).map(|_| rng.gen_range(-2..=2)).collect());
                let b = LineBundleSum::new(n, (0..rng.gen_range(0..3)).map(|_| rng.gen_range(-2..=2)).collect());
                assert_eq!(graded_hom_basis(&r, &a, &b).unwrap().len(), hom_dimension(&a, &b));
            }
        }
    }

    #[test]
    fn inhomogeneous_entries_are_rejected() {
        let r = p1();
        let m = PolyMatrix::parse(&r, &[vec!["s + 1".into()]]).unwrap();
        let err = GradedBundleMap::new(LineBundleSum::new(1, vec![-1]), LineBundleSum::new(1, vec![0]), m).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn euler_sequence_does_not_split() {
        for n in 1..=2 {
            let pi = euler_excess_example(n, Field::Rational);
            match find_graded_section(&pi).unwrap() {
                SectionOutcome::NonSplit(c) => {
                    assert_eq!((c.unknowns, c.kernel_dimension), (0, 0));
                    assert_eq!(c.rank_augmented, c.rank_matrix + 1);
                }
                o => panic!("{o:?}"),
            }
        }
    }

    #[test]
    fn unit_entry_splits() {
        let r = p1();
        let pi = map(&r, vec![0, -1], vec![0], &[&["1", "0"]]);
        match find_graded_section(&pi).unwrap() {
            SectionOutcome::Section(s) => assert_eq!(s.matrix, PolyMatrix::parse(&r, &[vec!["1".into()], vec!["0".into()]]).unwrap()),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn twisted_euler_does_not_split() {
        let r = p1();
        let pi = map(&r, vec![1, 1], vec![2], &[&["s", "t"]]);
        let SectionOutcome::NonSplit(c) = find_graded_section(&pi).unwrap() else { panic!("split") };
        // Hom(O(2), O(1)²) = 0
        assert_eq!(c.unknowns, 0);
    }

    #[test]
    fn non_surjective_maps_are_rejected() {
        let r = p1();
        let pi = map(&r, vec![-1, -1], vec![0], &[&["s", "0"]]);
        let err = find_graded_section(&pi).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref m) if m.contains("t is not in the radical")), "{err}");
    }

    #[test]
    fn automorphisms_preserve_the_verdict() {
        let pi = euler_excess_example(1, Field::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (g, g_inv) = random_automorphism(pi.ring(), &pi.source, &mut rng);
        assert_eq!(g.mul(&g_inv), PolyMatrix::identity(pi.ring(), 2));
        let twisted = GradedBundleMap::new(pi.source.clone(), pi.target.clone(), pi.matrix.mul(&g)).unwrap();
        assert!(matches!(find_graded_section(&twisted).unwrap(), SectionOutcome::NonSplit(_)));
    }

    #[test]
    fn split_surjections_have_sections() {
        for seed in 0..20 {
            for field in [Field::Rational, Field::Prime(32003)] {
                let pi = random_split_surjection(1 + (seed as usize % 2), seed, field);
                match find_graded_section(&pi).unwrap() {
                    SectionOutcome::Section(s) => assert_eq!(pi.matrix.mul(&s.matrix), PolyMatrix::identity(pi.ring(), pi.target.rank())),
                    o => panic!("seed {seed}: {o:?}"),
                }
            }
        }
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(3, 0), vec![Monomial::one(3)]);
    }
}
