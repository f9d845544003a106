//! Bounded cochain complexes, chain maps, cones, homology and tensor
//! products. Degrees are cohomological.

mod complex;
mod map;
mod morphism;
mod tensor;

pub use complex::{ChainComplex, ComplexJson, HomologyModule, Validation};
pub use map::{ChainMap, DegreeVerdict, QuasiIsoReport};
pub use morphism::{check_presented_map, PresentedMapCheck};
pub use tensor::{tensor_complexes, TensorLayout};
