//! p-adic scalars, balanced digits and the s-function.

mod digits;
mod hensel;
mod literal;
mod prime;
mod scalar;
mod valuation;
mod yelem;

pub use digits::{balanced_digits, from_digits, s_equivalence, s_function};
pub use hensel::{hensel_lift, residual_valuation_ok, AlgebraicInput, IntPoly};
pub use literal::{format_rational, parse_rational, parse_scalar};
pub use prime::Prime;
pub use scalar::{PAdicScalar, Repr};
pub use valuation::Valuation;
pub use yelem::YElem;
