//! Termination bound for rational inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::tilde_x::{tilde_x, TildeX};
use crate::engine::{expand, Status};
use crate::error::{Error, Result};
use crate::padic::{format_rational, PAdicScalar, Prime};
use crate::report::{BoundReport, BoundRow, Quantity, Relation};

const MAX_KAPPA: u32 = 512;
const RESOLUTION: i64 = 16;

/// `M = max{|z|, |y|/p + |z|/2, |x|/p² + |y|/(2p) + (1/(2p) + 1/4)|z|}`.
pub fn step_constant(p: Prime, x0: &BigRational, y0: &BigRational, z0: &BigRational) -> BigRational {
    let pr = BigRational::from_integer(p.big());
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let (x, y, z) = (x0.abs(), y0.abs(), z0.abs());
    let m1 = &y / &pr + &z / &two;
    let m2 = &x / (&pr * &pr) + &y / (&two * &pr) + (BigRational::one() / (&two * &pr) + four.recip()) * &z;
    z.max(m1).max(m2)
}

/// The three coarser bounds on `M`, in order.
pub fn step_constant_chain(x0: &BigRational, y0: &BigRational, z0: &BigRational) -> [BigRational; 3] {
    let (x, y, z) = (x0.abs(), y0.abs(), z0.abs());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let a = z.clone().max(&half * (&y + &z)).max(&quarter * (&x + &y + &z));
    let b = &x + &y + &z;
    let c = BigRational::from_integer(BigInt::from(3)) * x.max(y).max(z);
    [a, b, c]
}

/// Smallest `n ≥ 0` with `M x^n ≤ 1`, for `M > 0` and `0 < x < 1`.
///
/// Numerator and denominator are accumulated separately; reducing by the
/// gcd at every step costs far more than it saves.
fn first_power_below(m: &BigRational, x: &BigRational) -> u64 {
    let (mut num, mut den) = (m.numer().clone(), m.denom().clone());
    let mut n = 0;
    while num > den {
        num *= x.numer();
        den *= x.denom();
        n += 1;
    }
    n
}

/// `⌈−log M / log x̃⌉` (zero when `M ≤ 1`), refining the enclosure of `x̃`
/// until both endpoints agree. Returns the value and the enclosure used.
pub fn ceil_step_bound(p: Prime, m: &BigRational) -> (u64, TildeX) {
    let mut kappa = 32;
    loop {
        let tx = tilde_x(p, kappa);
        let lo = first_power_below(m, &tx.lo);
        let hi = first_power_below(m, &tx.hi);
        if lo == hi || kappa >= MAX_KAPPA {
            return (hi, tx);
        }
        kappa *= 2;
    }
}

/// Enclosure `[j/16, (j+1)/16]` of `−log M / log x̃`, from comparisons
/// `M^16 x^j ≤ 1`. Endpoints are widened in the safe direction.
pub fn step_bound_enclosure(m: &BigRational, tx: &TildeX) -> (BigRational, BigRational) {
    let m16 = num_traits::pow(m.clone(), RESOLUTION as usize);
    // bound ≤ j/16 iff M^16 x̃^j ≤ 1; with x̃ ≤ hi, M^16 hi^j ≤ 1 certifies it
    let upper = first_power_below(&m16, &tx.hi) as i64;
    let lower = first_power_below(&m16, &tx.lo) as i64;
    let lo = BigRational::new(BigInt::from((lower - 1).max(0)), BigInt::from(RESOLUTION));
    let hi = BigRational::new(BigInt::from(upper), BigInt::from(RESOLUTION));
    (lo, hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct StepBound {
    #[serde(serialize_with = "ser_rational")]
    pub m: BigRational,
    /// Certified enclosure of `−log M / log x̃`.
    #[serde(serialize_with = "ser_interval")]
    pub bound: (BigRational, BigRational),
    pub ceil_bound: u64,
    pub actual_steps: usize,
    pub within_bound: bool,
    /// `M ≤ first ≤ second ≤ third` along the displayed chain.
    pub chain_holds: bool,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn ser_interval<S: serde::Serializer>(q: &(BigRational, BigRational), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&format_rational(&q.0))?;
    seq.serialize_element(&format_rational(&q.1))?;
    seq.end()
}

/// Extra depth granted beyond `⌈bound⌉` so that a run which does not stop
/// in time is seen as such rather than cut off.
pub const DEPTH_SLACK: usize = 2;

/// Runs the expansion of `(x0/z0, y0/z0)` and compares the number of digit
/// pairs with `⌈−log M / log x̃⌉`.
pub fn step_bound(p: Prime, x0: &BigRational, y0: &BigRational, z0: &BigInt) -> Result<StepBound> {
    if z0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    for v in [x0, y0] {
        if p.split(v).is_some_and(|(_, unit)| !unit.is_integer()) {
            return Err(Error::InvalidInput(format!(
                "{} is not in Z[1/{}]",
                format_rational(v),
                p
            )));
        }
    }
    let zr = BigRational::from_integer(z0.clone());
    let m = step_constant(p, x0, y0, &zr);
    let (ceil_bound, tx) = ceil_step_bound(p, &m);
    let bound = step_bound_enclosure(&m, &tx);
    let alpha = PAdicScalar::exact(p, x0 / &zr);
    let beta = PAdicScalar::exact(p, y0 / &zr);
    let e = expand(&alpha, &beta, ceil_bound as usize + DEPTH_SLACK)?;
    let actual_steps = e.len();
    let finished = matches!(e.status(), Status::Finite(_));
    let chain = step_constant_chain(x0, y0, &zr);
    let chain_holds = m <= chain[0] && chain[0] <= chain[1] && chain[1] <= chain[2];
    Ok(StepBound {
        m,
        bound,
        ceil_bound,
        actual_steps,
        within_bound: finished && actual_steps as u64 <= ceil_bound,
        chain_holds,
    })
}

/// One row per triple: `steps ≤ ⌈bound⌉` and the chain of estimates on `M`.
pub fn step_bound_report(p: Prime, triples: &[(BigRational, BigRational, BigInt)]) -> Result<BoundReport> {
    let mut report = BoundReport::new("steps").param("p", p).param("cases", triples.len());
    for (i, (x, y, z)) in triples.iter().enumerate() {
        let sb = step_bound(p, x, y, z)?;
        let n = i as i64;
        report.push(
            BoundRow::new(
                n,
                "steps",
                Quantity::int(sb.actual_steps as i64),
                Relation::Le,
                Quantity::int(sb.ceil_bound as i64),
                sb.within_bound,
            )
            .with_note(format!("M = {}", format_rational(&sb.m))),
        );
        report.push(BoundRow::boolean(n, "chain", sb.chain_holds));
    }
    Ok(report)
}
