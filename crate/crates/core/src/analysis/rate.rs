//! Lower and upper bounds on the residual valuations.

use num_bigint::BigInt;

use crate::engine::{Coord, ExpansionTrace};
use crate::error::Result;
use crate::padic::{PAdicScalar, Valuation};
use crate::report::{BoundReport, BoundRow, Relation};

fn last_index(trace: &ExpansionTrace, n_max: usize) -> i64 {
    (n_max as i64).min(trace.len() as i64 - 1)
}

/// For `0 ≤ n ≤ n_max`:
/// `ν(α − Q^α_n) ≥ K_n + ⌊(n+2)/2⌋`, `ν(β − Q^β_n) ≥ K_n + ⌊(n+3)/2⌋` and
/// `min(ν(V^α_n), ν(V^β_n)) ≥ ⌊n/2⌋ + 1`.
///
/// Indices whose valuations are not certified end the report; the last
/// certified index is recorded as `certified_through`.
pub fn check_rate_theorem(trace: &ExpansionTrace, n_max: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new("rate").param("p", trace.prime());
    let top = last_index(trace, n_max);
    let mut certified = -1;
    for n in 0..=top {
        let kn = trace.expansion.big_k(n);
        let (qa, qb) = trace.approximation_valuations(n)?;
        let rows = [
            BoundRow::valuation(n, "alpha", qa, Relation::Ge, kn + (n + 2) / 2),
            BoundRow::valuation(n, "beta", qb, Relation::Ge, kn + (n + 3) / 2),
            trace
                .min_residual(n)?
                .and_then(|m| BoundRow::valuation(n, "min", m, Relation::Ge, n / 2 + 1)),
        ];
        if rows.iter().any(Option::is_none) {
            break;
        }
        for r in rows.into_iter().flatten() {
            report.push(r);
        }
        certified = n;
    }
    report.set_param("certified_through", certified);
    Ok(report)
}

/// `ν(V^α_{n−1}V^β_{n−2} − V^β_{n−1}V^α_{n−2})` for `n ≥ 1`.
pub fn cross_valuation(trace: &ExpansionTrace, n: i64) -> Result<Valuation> {
    let p = trace.prime();
    let conv = &trace.convergents;
    if trace.alpha.precision().is_none() && trace.beta.precision().is_none() {
        // W_m = T^C_m num − T^X_m den, so V_m = W_m / (p^{E_m} den)
        let w = |c: Coord, m: i64, num: &BigInt, den: &BigInt| -> Result<BigInt> {
            Ok(conv.scaled(Coord::C, m)? * num - conv.scaled(c, m)? * den)
        };
        let (an, ad) = (trace.alpha.num(), trace.alpha.den());
        let (bn, bd) = (trace.beta.num(), trace.beta.den());
        let x = w(Coord::A, n - 1, an, ad)? * w(Coord::B, n - 2, bn, bd)?
            - w(Coord::B, n - 1, bn, bd)? * w(Coord::A, n - 2, an, ad)?;
        let shift = conv.scale(n - 1)? as i64
            + conv.scale(n - 2)? as i64
            + p.int_valuation(ad).unwrap_or(0) as i64
            + p.int_valuation(bd).unwrap_or(0) as i64;
        return Ok(p
            .int_valuation(&x)
            .map_or(Valuation::Infinite, |v| Valuation::Finite(v as i64 - shift)));
    }
    let (v1a, v1b) = trace.residuals(n - 1)?;
    let (v2a, v2b) = trace.residuals(n - 2)?;
    let cross: PAdicScalar = v1a.mul(&v2b)?.sub(&v1b.mul(&v2a)?)?;
    Ok(cross.valuation())
}

/// `ν(V^α_{n−1}V^β_{n−2} − V^β_{n−1}V^α_{n−2}) = K_n` for `1 ≤ n ≤ n_max`,
/// and its consequence `min_n + min_{n−1} ≤ K_{n+1}` where `K_{n+1}` exists.
pub fn check_upper_bound(trace: &ExpansionTrace, n_max: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new("upper").param("p", trace.prime());
    let top = last_index(trace, n_max);
    let e = &trace.expansion;
    for n in 1..=top {
        let v = cross_valuation(trace, n)?;
        match BoundRow::valuation(n, "cross", v, Relation::Eq, e.big_k(n)) {
            Some(r) => report.push(r),
            None => {
                report.set_param("cross_undecided_from", n);
                break;
            }
        }
    }
    for n in 0..top {
        let (Some(m0), Some(m1)) = (trace.min_residual(n)?, trace.min_residual(n - 1)?) else {
            report.set_param("sum_undecided_from", n);
            break;
        };
        let sum = m0 + m1;
        match BoundRow::valuation(n, "sum", sum, Relation::Le, e.big_k(n + 1)) {
            Some(r) => report.push(r),
            None => {
                report.set_param("sum_undecided_from", n);
                break;
            }
        }
    }
    Ok(report)
}
