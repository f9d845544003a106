use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{module_is_zero, span_contains, syzygies, ModulePresentation, PolyMatrix, ZeroCertificate};

/// Outcome of testing a map of finitely presented modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedMapCheck {
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl PresentedMapCheck {
    pub fn is_iso(&self) -> bool {
        self.well_defined && self.injective && self.surjective
    }
}

/// Tests `φ : coker A → coker B`, `φ` given on generators.
pub fn check_presented_map(
    phi: &PolyMatrix,
    source: &ModulePresentation,
    target: &ModulePresentation,
) -> Result<PresentedMapCheck> {
    let (m, n) = (source.rank(), target.rank());
    if phi.rows() != n || phi.cols() != m {
        return Err(Error::Shape(format!("map is {}x{}, modules have ranks {n} and {m}", phi.rows(), phi.cols())));
    }
    let a = source.relations();
    let b = target.relations();
    let well_defined = a.cols() == 0 || span_contains(b, &phi.mul(a))?;
    if !well_defined {
        return Ok(PresentedMapCheck {
            well_defined,
            injective: false,
            surjective: false,
            witness: Some("a source relation maps outside the target relations".into()),
        });
    }
    let joint = phi.hstack(b);
    let cok = ModulePresentation::new(n, joint.clone())?;
    let (surjective, mut witness) = match module_is_zero(&cok)? {
        ZeroCertificate::Zero { .. } => (true, None),
        ZeroCertificate::NonZero { generator, normal_form } => {
            (false, Some(format!("target generator {generator} is missed (normal form {normal_form})")))
        }
    };
    let injective = if m == 0 {
        true
    } else {
        let kernel = if n == 0 {
            PolyMatrix::identity(phi.ring(), m)
        } else {
            let syz = syzygies(&joint)?;
            syz.submatrix(0..m, 0..syz.cols()).nonzero_columns()
        };
        let ok = span_contains(a, &kernel)?;
        if !ok && witness.is_none() {
            witness = Some("a kernel element is not a source relation".into());
        }
        ok
    };
    Ok(PresentedMapCheck { well_defined, injective, surjective, witness })
}
