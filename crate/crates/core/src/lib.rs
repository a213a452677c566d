//! Dimension-2 p-adic Jacobi–Perron expansions with exact convergent
//! arithmetic, bound checkers and brute-force reference implementations.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod padic;
pub mod report;

pub use error::{Error, Result};
