//! Checks for expansions built by [`construct_fast`](super::construct_fast).

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::construct::{construct_fast, GrowthPlan};
use super::dependence::um_product;
use crate::engine::{Expansion, ExpansionTrace};
use crate::error::{Error, Result};
use crate::padic::{Prime, Valuation};
use crate::report::{BoundReport, BoundRow, Relation};

/// Extra pairs used to build the proxy limit `Q_N`, `N = n_max + margin`.
pub const PROXY_MARGIN: usize = 40;

/// Threshold below which `U_n M_n^D` is reported as small.
pub const UM_THRESHOLD: f64 = 1e-6;

/// Builds `plan` with `n_max + 1 + margin` pairs and traces the first
/// `n_max + 1` of them against the proxy limit `Q_N`.
pub fn proxy_trace(plan: &GrowthPlan, p: Prime, n_max: usize, seed: u64, margin: usize) -> Result<ExpansionTrace> {
    let deep = construct_fast(plan, p, n_max + 1 + margin, seed)?;
    ExpansionTrace::with_proxy(format!("construct seed={seed}"), &deep, n_max + 1)
}

/// Lower bound for `ν(V_n(α))` valid for the true limit: residuals taken
/// against `Q_N` differ from the true ones by `C_n(α − Q_N)`, whose
/// valuation is at least `K_N − K_n + ⌊(N+2)/2⌋`.
pub fn proxy_horizon(deep: &Expansion, n: i64) -> i64 {
    let last = deep.len() as i64 - 1;
    deep.big_k(last) - deep.big_k(n) + (last + 2) / 2
}

/// `min(ν(V^α_n), ν(V^β_n)) ≥ f(n)` for plans given by an ℓ sequence.
pub fn check_fast_construction(trace: &ExpansionTrace, plan: &GrowthPlan, n_max: usize) -> Result<BoundReport> {
    if plan.ell(0).is_none() {
        return Err(Error::InvalidPlan("plan has no ℓ sequence".into()));
    }
    let mut report = BoundReport::new("fast_construction").param("p", trace.prime());
    let top = (n_max as i64).min(trace.len() as i64 - 1);
    for n in 0..=top {
        let f = plan.f(n).expect("ℓ plan");
        let row = trace
            .min_residual(n)?
            .and_then(|m| BoundRow::valuation(n, "min", m, Relation::Ge, f));
        match row {
            Some(r) => report.push(r),
            None => {
                report.set_param("undecided_from", n);
                break;
            }
        }
    }
    Ok(report)
}

/// `ν(α − Q^α_n) > 2K_n` and `ν(β − Q^β_n) > 2K_n`: the convergents lie in
/// the ball on which the first `n + 1` digits are constant.
pub fn check_ball_membership(trace: &ExpansionTrace, n_max: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new("ball").param("p", trace.prime());
    let top = (n_max as i64).min(trace.len() as i64 - 1);
    for n in 0..=top {
        let (qa, qb) = trace.approximation_valuations(n)?;
        let r = 2 * trace.expansion.big_k(n);
        let rows = [
            BoundRow::valuation(n, "alpha", qa, Relation::Gt, r),
            BoundRow::valuation(n, "beta", qb, Relation::Gt, r),
        ];
        if rows.iter().any(Option::is_none) {
            report.set_param("undecided_from", n);
            break;
        }
        rows.into_iter().flatten().for_each(|r| report.push(r));
    }
    Ok(report)
}

/// Rejects plans that cannot meet `k_{n+1} ≥ (D−1)(k_n + k_{n−1}) + 2D`
/// and `h_{n+1} ≥ (D−1)k_n + D` for large `n`.
pub fn validate_degree_plan(d: i64, plan: &GrowthPlan) -> Result<()> {
    plan.validate()?;
    if d < 1 {
        return Err(Error::InvalidPlan(format!("degree must be ≥ 1, got {d}")));
    }
    let k_fail = || Error::InvalidPlan(format!("k-growth condition fails for D = {d}: need k_{{n+1}} ≥ (D−1)(k_n + k_{{n−1}}) + 2D"));
    let h_fail = || Error::InvalidPlan(format!("h condition fails for D = {d}: need h_{{n+1}} ≥ (D−1)k_n + D"));
    match plan {
        GrowthPlan::Degree(e) => {
            if *e < d {
                return Err(k_fail());
            }
        }
        GrowthPlan::Affine {
            k_mult,
            k_add,
            h_mult,
            h_add,
        } => {
            if *k_mult < d - 1 || (*k_mult == d - 1 && *k_add < 2 * d) {
                return Err(k_fail());
            }
            if *h_mult < d - 1 || (*h_mult == d - 1 && *h_add < d) {
                return Err(h_fail());
            }
        }
        GrowthPlan::Ell(_) | GrowthPlan::EllLinear { .. } => {
            if d > 1 {
                return Err(k_fail());
            }
        }
        GrowthPlan::Tight | GrowthPlan::Generic { .. } => return Err(k_fail()),
    }
    Ok(())
}

/// Lower bound for `ν(β_{n+1}/α_{n+1})` read off the digits.
fn ratio_lower_bound(e: &Expansion, n1: usize) -> i64 {
    e.h(n1).unwrap_or(e.k(n1 as i64) + 1)
}

/// Last `n` at which one of the two coefficients in
/// `V_n/p^{g(n)} = μ_n V_{n−1}/p^{g(n−1)} + ν_n V_{n−2}/p^{g(n−2)}`,
/// `g(n) = (D−1)K_n + Dn`, is not certified integral; `−1` if none.
pub fn pre_asymptotic_index(e: &Expansion, d: i64) -> i64 {
    let mut n0 = -1;
    for n in 0..e.len() as i64 - 1 {
        let (kn, kn1) = (e.k(n), e.k(n - 1));
        let mu_ok = ratio_lower_bound(e, (n + 1) as usize) >= (d - 1) * kn + d;
        let nu_ok = e.k(n + 1) >= (d - 1) * (kn + kn1) + 2 * d;
        if !(mu_ok && nu_ok) {
            n0 = n;
        }
    }
    n0
}

/// Builds an expansion from `plan` and checks
/// `min ν(V_n) ≥ (D−1)K_n + Dn + C` for `0 ≤ n ≤ n_max`, where `C` is
/// the minimum of the shifted valuations over `−2 ≤ i ≤ max(n₀, 0)`.
///
/// `U_n M_n^D` is computed exactly for every `n`; its decrease beyond `n₀`
/// and its size are recorded in the parameters as evidence only.
pub fn fast_relation_suite(d: i64, plan: &GrowthPlan, p: Prime, n_max: usize, seed: u64) -> Result<BoundReport> {
    validate_degree_plan(d, plan)?;
    let short = construct_fast(plan, p, n_max + 1, seed)?;
    let n = n_max as i64;
    let target = 2 * ((d - 1) * short.big_k(n) + d * n) + 2 * d + 1;
    let deep = adaptive_deep(plan, p, n_max, seed, target)?;
    let trace = ExpansionTrace::with_proxy(format!("construct seed={seed}"), &deep, n_max + 1)?;
    let mut report = fast_relation_report(d, &deep, &trace, n_max)?;
    report.set_param("margin", deep.len() - n_max - 1);
    Ok(report)
}

/// The shortest extension (at most [`PROXY_MARGIN`] extra pairs) whose proxy
/// horizon at `n_max` reaches `target`. Fast-growing plans need only a few
/// extra pairs, and their exponents make long extensions unaffordable.
pub fn adaptive_deep(plan: &GrowthPlan, p: Prime, n_max: usize, seed: u64, target: i64) -> Result<Expansion> {
    let mut margin = 1;
    loop {
        let deep = construct_fast(plan, p, n_max + 1 + margin, seed)?;
        if margin >= PROXY_MARGIN || proxy_horizon(&deep, n_max as i64) >= target {
            return Ok(deep);
        }
        margin += 1;
    }
}

pub fn fast_relation_report(d: i64, deep: &Expansion, trace: &ExpansionTrace, n_max: usize) -> Result<BoundReport> {
    let e = &trace.expansion;
    let g = |n: i64| (d - 1) * e.big_k(n) + d * n;
    let n0 = pre_asymptotic_index(deep, d).min(n_max as i64);
    let mut c = i64::MAX;
    for i in -2..=n0.max(0) {
        let m = trace
            .min_residual(i)?
            .and_then(Valuation::finite)
            .ok_or_else(|| Error::InsufficientPrecision(format!("residual at {i} not certified")))?;
        c = c.min(m - g(i));
    }
    let mut report = BoundReport::new("fast_relation")
        .param("p", trace.prime())
        .param("D", d)
        .param("n0", n0)
        .param("C", c);
    let top = (n_max as i64).min(trace.len() as i64 - 1);
    let mut limit_through = -1;
    for n in 0..=top {
        let rhs = g(n) + c;
        let Some(row) = trace
            .min_residual(n)?
            .and_then(|m| BoundRow::valuation(n, "min", m, Relation::Ge, rhs))
        else {
            report.set_param("undecided_from", n);
            break;
        };
        report.push(row);
        if rhs <= proxy_horizon(deep, n) && limit_through == n - 1 {
            limit_through = n;
        }
    }
    report.set_param("limit_certified_through", limit_through);

    // U_n M_n^D as evidence
    let mut um: Vec<BigRational> = Vec::new();
    for n in 0..=top {
        match um_product(trace, n, d as u32)? {
            Some(x) => um.push(x),
            None => break,
        }
    }
    let start = (n0 + 1).max(0) as usize;
    let decreasing = um.len() > start + 1 && um[start..].windows(2).all(|w| w[1] < w[0]);
    let last = um.last().map(|x| x.to_f64().unwrap_or(0.0));
    report.set_param("UM_decreasing_after_n0", decreasing);
    if let Some(v) = last {
        report.set_param("UM_last", format!("{v:.6e}"));
        report.set_param("UM_below_threshold", v < UM_THRESHOLD);
    }
    let threshold = BigRational::from_float(UM_THRESHOLD).expect("finite");
    let tail = um.iter().rev().take_while(|x| **x < threshold).count();
    if tail > 0 {
        report.set_param("UM_below_threshold_from", um.len() - tail);
    }
    if let Some(first) = um.first() {
        report.set_param("UM_first", format!("{:.6e}", first.to_f64().unwrap_or(0.0)));
    }
    Ok(report)
}
