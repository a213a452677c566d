//! Checkers for the quantitative bounds, the `x̃` machinery and the
//! constructions of fast-converging expansions.

mod construct;
mod dependence;
mod fast;
mod growth;
mod rate;
mod steps;
mod tilde_x;

pub use construct::{construct_fast, construct_with, ConstructOptions, GrowthPlan};
pub use dependence::{
    convergent_sequence, linear_dependence_monitor, relation_propagation_check, truncation_sequence, um_product,
    RelationPoly,
};
pub use fast::{
    adaptive_deep, check_ball_membership, check_fast_construction, fast_relation_report, fast_relation_suite, pre_asymptotic_index,
    proxy_horizon, proxy_trace, validate_degree_plan, PROXY_MARGIN, UM_THRESHOLD,
};
pub use growth::{
    check_candidate_height, euclidean_height, growth_bound, growth_bound_with, height_floor, height_floor_top,
    trivial_floor, HeightFloor, DEFAULT_KAPPA,
};
pub use rate::{check_rate_theorem, check_upper_bound, cross_valuation};
pub use steps::{
    ceil_step_bound, step_bound, step_bound_enclosure, step_bound_report, step_constant, step_constant_chain, StepBound,
    DEPTH_SLACK,
};
pub use tilde_x::{tilde_x, TildeX};
