//! Exact multivariate polynomial arithmetic over ℚ or F_p.

mod coeff;
mod monomial;
mod parse;
mod poly;

pub use coeff::{Coeff, Field, DEFAULT_PRIME};
pub use monomial::{Monomial, OrderKind};
pub use poly::{same_ring, PolyRing, Polynomial, Ring};
