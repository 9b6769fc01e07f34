//! Exact rational arithmetic, polynomials and polynomial linear algebra.

mod matrix;
mod multipoly;
mod parse;
mod unipoly;

pub use matrix::{poly_det, Matrix};
pub use multipoly::{Monomial, MultiPoly};
pub use parse::{parse_poly, ParseError};
pub use unipoly::UniPoly;
