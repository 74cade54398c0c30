//! Homogeneous ternary forms over ℚ.

mod form;
mod monomial;
mod parse;

pub use form::{Axis, DegreeMismatch, TernaryForm};
pub use monomial::{basis, basis_index, Monomial};
pub use parse::{parse_form, FormParseError};
