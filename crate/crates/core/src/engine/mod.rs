//! The dimension-2 Jacobi–Perron expansion and its convergents.

mod convergents;
mod expansion;
mod identities;
mod tilde;
mod trace;

pub use convergents::{Convergents, Coord};
pub use expansion::{expand, expand_with, jp_step, ExpandOptions, Expansion, Status, StepOutcome};
pub use identities::identity_checks;
pub use tilde::TildeTable;
pub use trace::{certified_prefix_radius, residual_valuation, residual_value, ExpansionTrace, Limit};
