//! Certified enclosures of the positive root `x̃` of
//! `X^3 − X^2/2 − X/(2p) − 1/p^3`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::padic::{format_rational, Prime};

/// `[lo, hi] ∋ x̃` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeX {
    pub prime: Prime,
    pub lo: BigRational,
    pub hi: BigRational,
}

/// `2p^3 X^3 − p^3 X^2 − p^2 X − 2`, a positive multiple of the cubic.
fn cubic(p: &BigRational, x: &BigRational) -> BigRational {
    let p2 = p * p;
    let p3 = &p2 * p;
    let two = BigRational::from_integer(BigInt::from(2));
    &two * &p3 * x * x * x - &p3 * x * x - &p2 * x - two
}

/// Bisects `[1/2, 1]` `κ` times, so `hi − lo = 2^{−κ−1}`.
///
/// The midpoint rule is deterministic, so the enclosure for `κ + 1` is
/// nested in the one for `κ`.
pub fn tilde_x(prime: Prime, kappa: u32) -> TildeX {
    let p = BigRational::from_integer(prime.big());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut lo = half.clone();
    let mut hi = BigRational::one();
    debug_assert!(cubic(&p, &lo).is_negative() && cubic(&p, &hi).is_positive());
    for _ in 0..kappa {
        let mid = (&lo + &hi) * &half;
        let g = cubic(&p, &mid);
        if g.is_zero() {
            // the root is irrational for every p, but stay safe
            return TildeX {
                prime,
                lo: mid.clone(),
                hi: mid,
            };
        }
        if g.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    TildeX { prime, lo, hi }
}

impl TildeX {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Whether the cubic changes sign across the enclosure.
    pub fn sign_change(&self) -> bool {
        let p = BigRational::from_integer(self.prime.big());
        let (a, b) = (cubic(&p, &self.lo), cubic(&p, &self.hi));
        !a.is_positive() && !b.is_negative()
    }

    /// Enclosure of `p x̃`, the positive root of `X^3 − (p/2)X^2 − (p/2)X − 1`.
    pub fn scaled(&self) -> (BigRational, BigRational) {
        let p = BigRational::from_integer(self.prime.big());
        (&p * &self.lo, &p * &self.hi)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Serialize for TildeX {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.lo), format_rational(&self.hi)].serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // plain f64 bisection, independent of the rational code path
    fn float_root(p: f64) -> f64 {
        let f = |x: f64| x * x * x - x * x / 2.0 - x / (2.0 * p) - 1.0 / (p * p * p);
        let (mut lo, mut hi) = (0.5, 1.0);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if f(m) < 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn enclosures() {
        let mut prev = f64::INFINITY;
        for p in [3u64, 5, 7, 101, 10007] {
            let t = tilde_x(Prime::new(p).unwrap(), 20);
            let (lo, hi) = t.to_f64();
            assert!(0.5 < lo && hi < 1.0);
            assert!(t.sign_change());
            let r = float_root(p as f64);
            assert!(lo <= r && r <= hi, "p={p}: {lo} {r} {hi}");
            let mid = (lo + hi) / 2.0;
            assert!(mid < prev);
            prev = mid;
        }
        let t5 = tilde_x(Prime::new(5).unwrap(), 12);
        let (lo, hi) = t5.to_f64();
        assert!((0.5 * (lo + hi) - 0.66771).abs() < 1e-3);
    }

    #[test]
    fn nested_and_halving() {
        let p = Prime::new(7).unwrap();
        let mut prev = tilde_x(p, 1);
        for k in 2..30 {
            let t = tilde_x(p, k);
            assert!(t.lo >= prev.lo && t.hi <= prev.hi);
            assert_eq!(t.width() * BigRational::from_integer(2.into()), prev.width());
            prev = t;
        }
    }
}
