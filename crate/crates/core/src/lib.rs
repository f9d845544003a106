//! Exact homological algebra over polynomial rings, aimed at derived
//! intersections of linear cycles in affine space.

pub mod cycles;
pub mod error;
pub mod graded_split;
pub mod groebner;
pub mod ak;
pub mod homalg;
pub mod koszul;
pub mod polyring;

pub use error::{Error, Result};
