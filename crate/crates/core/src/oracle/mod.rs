//! Slow, independent reference implementations for differential testing.

mod naive;
mod rational_jp;
mod search;

pub use naive::{naive_balanced_expand, naive_s};
pub use rational_jp::{rational_jp, RationalJPRun, RationalJPState, ITERATION_CAP};
pub use search::{in_ball, small_height_search, within_caps, Hit, SearchCaps, SearchResult};
