//! p-adic scalars, either exact rationals or values known modulo `p^N`.
//!
//! Precision calculus for truncated operands. A truncated value `x` is a
//! representative `x̂` (balanced digits, denominator a power of `p`) with
//! absolute precision `N_x`: the true value lies in `x̂ + p^{N_x} Z_p`.
//! Exact operands have `N = +∞`. Writing `v_x` for a lower bound on
//! `ν_p(x)` (the exact valuation when certified, `N_x` otherwise):
//!
//! * `x ± y`: `N = min(N_x, N_y)`
//! * `x · y`: `N = min(v_x + N_y, v_y + N_x, N_x + N_y)`
//! * `1 / y`: `N = N_y − 2 ν_p(y)`, defined only when `ν_p(ŷ) < N_y`
//! * `x / y`: `x · (1 / y)`
//!
//! Every bound is a worst case: perturbing the inputs anywhere inside their
//! balls moves the result only inside the output ball.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Prime, Valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Repr {
    /// An exact rational number.
    Exact(BigRational),
    /// Known modulo `p^precision`; `approx` is the balanced representative.
    Truncated { approx: BigRational, precision: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicScalar {
    prime: Prime,
    repr: Repr,
}

impl PAdicScalar {
    pub fn exact(prime: Prime, value: BigRational) -> Self {
        PAdicScalar {
            prime,
            repr: Repr::Exact(value),
        }
    }

    pub fn from_int(prime: Prime, value: i64) -> Self {
        Self::exact(prime, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero(prime: Prime) -> Self {
        Self::exact(prime, BigRational::zero())
    }

    pub fn one(prime: Prime) -> Self {
        Self::exact(prime, BigRational::one())
    }

    /// A value known modulo `p^precision`. `value` may be any rational; it is
    /// replaced by its balanced representative.
    pub fn truncated(prime: Prime, value: &BigRational, precision: i64) -> Self {
        PAdicScalar {
            prime,
            repr: Repr::Truncated {
                approx: prime.reduce(value, precision),
                precision,
            },
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Exact(q) => Some(q),
            Repr::Truncated { .. } => None,
        }
    }

    /// The exact value, or the balanced representative of a truncated one.
    pub fn approx(&self) -> &BigRational {
        match &self.repr {
            Repr::Exact(q) => q,
            Repr::Truncated { approx, .. } => approx,
        }
    }

    /// Absolute precision; `None` for exact values.
    pub fn precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Truncated { precision, .. } => Some(*precision),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Exact(q) => match self.prime.rational_valuation(q) {
                Some(v) => Valuation::Finite(v),
                None => Valuation::Infinite,
            },
            Repr::Truncated { approx, precision } => match self.prime.rational_valuation(approx) {
                Some(v) => Valuation::Finite(v),
                None => Valuation::AtLeast(*precision),
            },
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact(q) if q.is_zero())
    }

    /// True for a truncated value whose known digits are all zero.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        matches!(&self.repr, Repr::Truncated { approx, .. } if approx.is_zero())
    }

    /// Exactly zero, or zero to the known precision.
    pub fn vanishes(&self) -> bool {
        self.is_exact_zero() || self.is_indistinguishable_from_zero()
    }

    /// Lowers the precision of a value (exact values become truncated).
    pub fn with_precision(&self, precision: i64) -> Self {
        let precision = self.precision().map_or(precision, |n| n.min(precision));
        Self::truncated(self.prime, self.approx(), precision)
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        Ok(())
    }

    fn build(&self, value: BigRational, precision: Option<i64>) -> Self {
        match precision {
            None => Self::exact(self.prime, value),
            Some(n) => Self::truncated(self.prime, &value, n),
        }
    }

    fn valuation_floor(&self) -> Option<i64> {
        self.valuation().lower_bound()
    }

    pub fn neg(&self) -> Self {
        self.build(-self.approx().clone(), self.precision())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let precision = min_opt(self.precision(), other.precision());
        Ok(self.build(self.approx() + other.approx(), precision))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let precision = min_opt(self.precision(), other.precision());
        Ok(self.build(self.approx() - other.approx(), precision))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(self.prime));
        }
        // exact zeros are handled above, so the floors are finite
        let vx = self.valuation_floor().expect("nonzero");
        let vy = other.valuation_floor().expect("nonzero");
        let mut precision: Option<i64> = None;
        if let Some(ny) = other.precision() {
            precision = min_opt(precision, Some(vx + ny));
        }
        if let Some(nx) = self.precision() {
            precision = min_opt(precision, Some(vy + nx));
        }
        if let (Some(nx), Some(ny)) = (self.precision(), other.precision()) {
            precision = min_opt(precision, Some(nx + ny));
        }
        Ok(self.build(self.approx() * other.approx(), precision))
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Self::exact(self.prime, q.recip()))
            }
            Repr::Truncated { approx, precision } => {
                let Some(v) = self.prime.rational_valuation(approx) else {
                    return Err(Error::InsufficientPrecision(format!(
                        "divisor is indistinguishable from zero modulo p^{precision}"
                    )));
                };
                Ok(Self::truncated(self.prime, &approx.recip(), precision - 2 * v))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        self.mul(&other.inv()?)
    }

    /// Integer power, `e ≥ 0`.
    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.prime);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(q) => write!(f, "{q}"),
            Repr::Truncated { approx, precision } => {
                write!(f, "{approx} + O({}^{precision})", self.prime)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    #[test]
    fn exact_examples() {
        let p = p5();
        let a = PAdicScalar::exact(p, q(7, 5));
        assert_eq!(a.add(&PAdicScalar::zero(p)).unwrap(), a);

        let d = PAdicScalar::exact(p, q(32, 5))
            .sub(&PAdicScalar::exact(p, q(7, 5)))
            .unwrap();
        assert_eq!(d.approx(), &q(5, 1));
        assert_eq!(d.valuation(), Valuation::Finite(1));

        let r = PAdicScalar::from_int(p, 1)
            .div(&PAdicScalar::from_int(p, 5))
            .unwrap();
        assert_eq!(r.approx(), &q(1, 5));
        assert_eq!(r.valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn valuations() {
        let p = p5();
        assert_eq!(
            PAdicScalar::exact(p, q(32, 25)).valuation(),
            Valuation::Finite(-2)
        );
        assert_eq!(PAdicScalar::zero(p).valuation(), Valuation::Infinite);
        assert_eq!(
            PAdicScalar::from_int(p, 50).valuation(),
            Valuation::Finite(2)
        );
        let t = PAdicScalar::truncated(p, &q(125, 1), 3);
        assert!(t.is_indistinguishable_from_zero());
        assert_eq!(t.valuation(), Valuation::AtLeast(3));
    }

    #[test]
    fn division_errors() {
        let p = p5();
        let one = PAdicScalar::one(p);
        assert_eq!(one.div(&PAdicScalar::zero(p)), Err(Error::DivisionByZero));
        let z = PAdicScalar::truncated(p, &q(25, 1), 2);
        assert!(matches!(
            one.div(&z),
            Err(Error::InsufficientPrecision(_))
        ));
        let other = PAdicScalar::one(Prime::new(7).unwrap());
        assert!(matches!(one.add(&other), Err(Error::PrimeMismatch(5, 7))));
    }

    #[test]
    fn inverse_loses_twice_the_valuation() {
        let p = p5();
        // 5 + 3*25, known mod 5^6
        let y = PAdicScalar::truncated(p, &q(80, 1), 6);
        let inv = y.inv().unwrap();
        assert_eq!(inv.precision(), Some(4));
        assert_eq!(inv.valuation(), Valuation::Finite(-1));
    }

    fn perturb(p: Prime, x: &BigRational, n: i64, k: i64) -> BigRational {
        x + BigRational::from_integer(k.into()) * p.pow_rational(n)
    }

    proptest! {
        // worst-case check of the calculus: perturbing operands anywhere in
        // their balls keeps the exact result congruent to the truncated one
        #[test]
        fn calculus_is_sound(
            xn in -3000i64..3000, xd in 1i64..40, yn in -3000i64..3000, yd in 1i64..40,
            nx in 1i64..8, ny in 1i64..8, k1 in -30i64..30, k2 in -30i64..30,
        ) {
            let p = p5();
            let x = q(xn, xd);
            let y = q(yn, yd);
            let tx = PAdicScalar::truncated(p, &x, nx);
            let ty = PAdicScalar::truncated(p, &y, ny);
            let x2 = perturb(p, &x, nx, k1);
            let y2 = perturb(p, &y, ny, k2);
            let ex = PAdicScalar::exact(p, x2.clone());
            let ey = PAdicScalar::exact(p, y2.clone());
            type Op = fn(&PAdicScalar, &PAdicScalar) -> Result<PAdicScalar>;
            let ops: [Op; 4] = [PAdicScalar::add, PAdicScalar::sub, PAdicScalar::mul, PAdicScalar::div];
            for op in ops {
                let (Ok(t), Ok(e)) = (op(&tx, &ty), op(&ex, &ey)) else { continue };
                let n = t.precision().unwrap();
                let diff = PAdicScalar::exact(p, t.approx() - e.approx());
                prop_assert!(diff.valuation().at_least(n) == Some(true),
                    "result {} vs exact {} at precision {}", t, e.approx(), n);
            }
        }
    }
}
