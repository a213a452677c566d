//! Euclidean growth of the convergents and the matching height floors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::tilde_x::{tilde_x, TildeX};
use crate::engine::{Coord, ExpansionTrace, Status};
use crate::error::Result;
use crate::padic::{format_rational, Prime};
use crate::report::{BoundReport, BoundRow, Quantity, Relation};

/// Bisection depth used when the caller does not supply an enclosure.
pub const DEFAULT_KAPPA: u32 = 64;

fn rpow(x: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(x.clone(), n as usize)
    } else {
        num_traits::pow(x.recip(), (-n) as usize)
    }
}

/// `max(|x|, |y|, |z|)` for rationals.
pub fn euclidean_height(xs: &[BigRational]) -> BigRational {
    xs.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}

/// Enclosure of `1/(3 x̃^n)` and of `1/(3 p^{K} x̃^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFloor {
    pub n: i64,
    /// `[1/(3 x̃_hi^n), 1/(3 x̃_lo^n)]`
    pub plain: (BigRational, BigRational),
    /// `plain / p^K`
    pub scaled: (BigRational, BigRational),
}

pub fn height_floor(n: i64, big_k: i64, tx: &TildeX) -> HeightFloor {
    let three = BigRational::from_integer(BigInt::from(3));
    let lo = (&three * rpow(&tx.hi, n)).recip();
    let hi = (&three * rpow(&tx.lo, n)).recip();
    let pk = tx.prime.pow_rational(-big_k);
    HeightFloor {
        n,
        scaled: (&lo * &pk, &hi * &pk),
        plain: (lo, hi),
    }
}

impl HeightFloor {
    /// `Some(true)` if `height` is above the whole enclosure of the plain
    /// floor, `Some(false)` if below it, `None` inside.
    pub fn admits(&self, height: &BigRational) -> Option<bool> {
        decide_ge(height, &self.plain)
    }

    pub fn admits_scaled(&self, height: &BigRational) -> Option<bool> {
        decide_ge(height, &self.scaled)
    }
}

fn decide_ge(x: &BigRational, (lo, hi): &(BigRational, BigRational)) -> Option<bool> {
    if x >= hi {
        Some(true)
    } else if x < lo {
        Some(false)
    } else {
        None
    }
}

/// Last index `n` for which the expansion has length `≥ n + 1`, i.e.
/// `z_{n+1} ≠ 0` in the integer recurrence.
pub fn height_floor_top(trace: &ExpansionTrace) -> i64 {
    match trace.status() {
        Status::Finite(len) => len as i64 - 2,
        _ => trace.len() as i64 - 1,
    }
}

/// `max(|A_n|, |B_n|, |C_n|) ≤ H (p x̃)^n` with `H = (p x̃_hi)^2`, and the
/// floor `max(|A_n|, |B_n|, |C_n|) ≥ 1/(3 p^{K_n} x̃^n)`.
///
/// The seeds `X_{−2}, X_{−1}, X_0` have entries of absolute value below
/// `(p x̃)^2`, so with the sequence started at `n = −2` the growth constant
/// is `(p x̃)^2`.
pub fn growth_bound(trace: &ExpansionTrace, n_max: usize) -> Result<BoundReport> {
    growth_bound_with(trace, n_max, &tilde_x(trace.prime(), DEFAULT_KAPPA))
}

pub fn growth_bound_with(trace: &ExpansionTrace, n_max: usize, tx: &TildeX) -> Result<BoundReport> {
    let p: Prime = trace.prime();
    let conv = &trace.convergents;
    let e = &trace.expansion;
    let (_, r_hi) = tx.scaled();
    let h = &r_hi * &r_hi;
    let mut report = BoundReport::new("growth")
        .param("p", p)
        .param("H", format_rational(&h))
        .param("tilde_x_lo", format_rational(&tx.lo))
        .param("tilde_x_hi", format_rational(&tx.hi));
    let top = (n_max as i64).min(trace.len() as i64 - 1);
    let mut heights = Vec::with_capacity((top + 1).max(0) as usize);
    let mut bound = h.clone();
    for n in 0..=top {
        let xs: Vec<BigRational> = Coord::ALL
            .iter()
            .map(|c| conv.value(*c, n))
            .collect::<Result<_>>()?;
        let height = euclidean_height(&xs);
        report.push(BoundRow::rational(n, "upper", height.clone(), Relation::Le, bound.clone()));
        bound *= &r_hi;
        heights.push(height);
    }
    let floor_top = height_floor_top(trace).min(top);
    for n in 0..=floor_top {
        let floor = height_floor(n, e.big_k(n), tx);
        let height = &heights[n as usize];
        match floor.admits_scaled(height) {
            Some(ok) => report.push(BoundRow::new(
                n,
                "lower",
                Quantity::Rational(height.clone()),
                Relation::Ge,
                Quantity::Interval(floor.scaled.0.clone(), floor.scaled.1.clone()),
                ok,
            )),
            None => {
                report.set_param("lower_undecided_from", n);
                break;
            }
        }
    }
    Ok(report)
}

/// The height floor for a candidate `(t, u, v)` approximating a pair with
/// expansion length `≥ n + 1`.
pub fn check_candidate_height(t: &BigRational, u: &BigRational, v: &BigRational, n: i64, tx: &TildeX) -> Option<bool> {
    height_floor(n, 0, tx).admits(&euclidean_height(&[t.clone(), u.clone(), v.clone()]))
}

/// `1/3`, the floor at `n = 0` for every enclosure.
pub fn trivial_floor() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(3))
}
