use super::buchberger::{sub_scaled, GroebnerBasis};
use super::matrix::{FreeModuleElem, PolyMatrix};
use super::order::ModuleOrder;
use super::presentation::ModulePresentation;
use super::{build, rering};
use crate::error::{Error, Result};
use crate::polyring::same_ring;

/// Outcome of solving `M·c = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lifted {
    Lifted(FreeModuleElem),
    /// `b` is not in the image; carries the nonzero normal form.
    NotInImage(FreeModuleElem),
}

impl Lifted {
    pub fn ok(self) -> Option<FreeModuleElem> {
        match self {
            Lifted::Lifted(c) => Some(c),
            Lifted::NotInImage(_) => None,
        }
    }

    pub fn is_lifted(&self) -> bool {
        matches!(self, Lifted::Lifted(_))
    }
}

/// The image of a matrix with a cofactor-tracking Gröbner basis, for
/// repeated lifts and membership tests.
#[derive(Clone, Debug)]
pub struct ImageBasis {
    matrix: PolyMatrix,
    gb: GroebnerBasis,
}

impl ImageBasis {
    pub fn new(m: &PolyMatrix) -> Result<ImageBasis> {
        let gb = build(m.ring(), m.rows(), &m.columns(), &ModuleOrder::top(m.ring().order()), true)?;
        Ok(ImageBasis { matrix: m.clone(), gb })
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    fn check(&self, b: &FreeModuleElem) -> Result<()> {
        if b.len() != self.matrix.rows() {
            return Err(Error::Shape(format!("vector of length {} for {} rows", b.len(), self.matrix.rows())));
        }
        if !same_ring(b.ring(), self.matrix.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn lift(&self, b: &FreeModuleElem) -> Result<Lifted> {
        self.check(b)?;
        let ring = self.matrix.ring();
        let tags = self.gb.tags().expect("tracked basis");
        let mut tag = FreeModuleElem::zero(ring, self.matrix.cols());
        let rem = self.gb.reducer().reduce(b.clone(), true, |k, m, c| sub_scaled(&mut tag, m, c, &tags[k]));
        if !rem.is_zero() {
            return Ok(Lifted::NotInImage(rem));
        }
        let c = tag.neg();
        debug_assert_eq!(&self.matrix.apply(&c), b);
        Ok(Lifted::Lifted(c))
    }

    pub fn reduce(&self, b: &FreeModuleElem) -> Result<FreeModuleElem> {
        self.check(b)?;
        Ok(self.gb.reducer().reduce(b.clone(), true, |_, _, _| {}))
    }

    pub fn contains(&self, b: &FreeModuleElem) -> Result<bool> {
        self.check(b)?;
        Ok(self.gb.reducer().reduce(b.clone(), false, |_, _, _| {}).is_zero())
    }

    /// Lifts every column of `b`; fails on the first column outside the image.
    pub fn lift_matrix(&self, b: &PolyMatrix) -> Result<PolyMatrix> {
        let mut cols = Vec::with_capacity(b.cols());
        for (j, col) in b.columns().into_iter().enumerate() {
            match self.lift(&col)? {
                Lifted::Lifted(c) => cols.push(c),
                Lifted::NotInImage(r) => {
                    return Err(Error::NotSubmodule { column: j, remainder: r.to_string() });
                }
            }
        }
        PolyMatrix::from_columns(self.matrix.ring(), self.matrix.cols(), &cols)
    }
}

/// Solves `M·c = b`.
pub fn lift(b: &FreeModuleElem, m: &PolyMatrix) -> Result<Lifted> {
    if b.len() != m.rows() {
        return Err(Error::Shape(format!("vector of length {} for {} rows", b.len(), m.rows())));
    }
    ImageBasis::new(m)?.lift(b)
}

/// Every column of `vecs` lies in the span of the columns of `gens`.
pub fn span_contains(gens: &PolyMatrix, vecs: &PolyMatrix) -> Result<bool> {
    if vecs.is_zero() || vecs.rows() == 0 {
        return Ok(true);
    }
    if gens.cols() == 0 {
        return Ok(false);
    }
    let image = ImageBasis::new(gens)?;
    for c in vecs.columns() {
        if !image.contains(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves `gens·X = vecs` column by column.
pub fn lift_columns(gens: &PolyMatrix, vecs: &PolyMatrix) -> Result<PolyMatrix> {
    let ring = gens.ring();
    if vecs.is_zero() || gens.cols() == 0 {
        if !vecs.is_zero() {
            return Err(Error::NotSubmodule { column: 0, remainder: "nonzero vector in the zero module".into() });
        }
        return Ok(PolyMatrix::zeros(ring, gens.cols(), vecs.cols()));
    }
    ImageBasis::new(gens)?.lift_matrix(vecs)
}

/// Remainder of `f` modulo `gb`; zero exactly when `f` is in the submodule.
pub fn normal_form(f: &FreeModuleElem, gb: &GroebnerBasis) -> Result<FreeModuleElem> {
    if f.len() != gb.rank() {
        return Err(Error::Shape(format!("vector of length {} against rank {}", f.len(), gb.rank())));
    }
    if f.ring().vars() != gb.ring().vars() || f.ring().field() != gb.ring().field() {
        return Err(Error::RingMismatch);
    }
    let v = rering(f, gb.ring());
    let r = gb.reducer().reduce(v, true, |_, _, _| {});
    Ok(rering(&r, f.ring()))
}

/// Evidence for [`module_is_zero`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroCertificate {
    /// `lifts[i]` expresses `e_i` through the relations.
    Zero { lifts: Vec<FreeModuleElem> },
    /// Generator `generator` survives with this normal form.
    NonZero { generator: usize, normal_form: FreeModuleElem },
}

impl ZeroCertificate {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroCertificate::Zero { .. })
    }
}

/// Decides whether a presented module vanishes.
pub fn module_is_zero(p: &ModulePresentation) -> Result<ZeroCertificate> {
    let image = ImageBasis::new(p.relations())?;
    let mut lifts = Vec::with_capacity(p.rank());
    for i in 0..p.rank() {
        match image.lift(&FreeModuleElem::basis(p.ring(), p.rank(), i))? {
            Lifted::Lifted(c) => lifts.push(c),
            Lifted::NotInImage(r) => return Ok(ZeroCertificate::NonZero { generator: i, normal_form: r }),
        }
    }
    Ok(ZeroCertificate::Zero { lifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::groebner_basis;
    use crate::polyring::{Field, OrderKind, PolyRing, Ring};

    fn r2() -> Ring {
        PolyRing::new(&["x", "y"], Field::Rational, OrderKind::Degrevlex).unwrap()
    }

    fn row(r: &Ring, entries: &[&str]) -> PolyMatrix {
        PolyMatrix::parse(r, &[entries.iter().map(|s| s.to_string()).collect()]).unwrap()
    }

    fn scalar(r: &Ring, s: &str) -> FreeModuleElem {
        FreeModuleElem::new(r, vec![r.parse(s).unwrap()])
    }

    #[test]
    fn x_squared_through_x() {
        let r = r2();
        let c = lift(&scalar(&r, "x^2"), &row(&r, &["x"])).unwrap();
        assert_eq!(c, Lifted::Lifted(scalar(&r, "x")));
    }

    #[test]
    fn one_is_not_in_the_maximal_ideal() {
        let r = r2();
        match lift(&scalar(&r, "1"), &row(&r, &["x", "y"])).unwrap() {
            Lifted::NotInImage(cert) => assert_eq!(cert, scalar(&r, "1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sum_of_generators() {
        let r = r2();
        let c = lift(&scalar(&r, "x + y"), &row(&r, &["x", "y"])).unwrap().ok().unwrap();
        assert_eq!(c, FreeModuleElem::new(&r, vec![r.one(), r.one()]));
    }

    #[test]
    fn shape_errors() {
        let r = r2();
        assert!(lift(&FreeModuleElem::zero(&r, 2), &row(&r, &["x"])).is_err());
    }

    #[test]
    fn normal_forms() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let gb = groebner_basis(&r, 1, &[scalar(&r, "x - 1")], &ModuleOrder::default()).unwrap();
        assert_eq!(normal_form(&scalar(&r, "x^2"), &gb).unwrap(), scalar(&r, "1"));
        assert!(normal_form(&scalar(&r, "0"), &gb).unwrap().is_zero());
        let r = r2();
        let gb = groebner_basis(&r, 1, &[scalar(&r, "x"), scalar(&r, "y")], &ModuleOrder::default()).unwrap();
        assert!(normal_form(&scalar(&r, "x"), &gb).unwrap().is_zero());
        let nf = normal_form(&scalar(&r, "x^3 + 2"), &gb).unwrap();
        assert_eq!(normal_form(&nf, &gb).unwrap(), nf);
    }

    #[test]
    fn zero_tests() {
        let r = PolyRing::new(&["x"], Field::Rational, OrderKind::Degrevlex).unwrap();
        let unit = ModulePresentation::new(1, row(&r, &["1"])).unwrap();
        assert!(module_is_zero(&unit).unwrap().is_zero());
        let cyclic = ModulePresentation::new(1, row(&r, &["x"])).unwrap();
        match module_is_zero(&cyclic).unwrap() {
            ZeroCertificate::NonZero { generator, .. } => assert_eq!(generator, 0),
            z => panic!("{z:?}"),
        }
        let id = ModulePresentation::new(2, PolyMatrix::identity(&r, 2)).unwrap();
        assert!(module_is_zero(&id).unwrap().is_zero());
    }
}
