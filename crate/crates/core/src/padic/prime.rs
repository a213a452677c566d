use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An odd prime `p ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as a big integer.
    pub fn pow(self, e: u64) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }

    /// `p^e` as a rational, `e` may be negative.
    pub fn pow_rational(self, e: i64) -> BigRational {
        if e >= 0 {
            BigRational::from_integer(self.pow(e as u64))
        } else {
            BigRational::new_raw(BigInt::one(), self.pow(e.unsigned_abs()))
        }
    }

    /// Largest balanced digit `(p-1)/2`.
    pub fn half(self) -> i64 {
        ((self.0 - 1) / 2) as i64
    }

    /// p-adic valuation of a nonzero integer; `None` for zero.
    ///
    /// Uses repeated squaring of `p` so that large valuations of large
    /// integers cost `O(log v)` divisions.
    pub fn int_valuation(self, x: &BigInt) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let p = self.big();
        // cheap path for the common small case
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(0);
        }
        let mut y = q;
        let mut v = 1u64;
        let (q2, r2) = y.div_rem(&p);
        if !r2.is_zero() {
            return Some(v);
        }
        y = q2;
        v += 1;

        let mut powers = vec![p.clone()];
        loop {
            let last = powers.last().expect("nonempty");
            if last.bits() * 2 > y.bits() + 1 {
                break;
            }
            let next = last * last;
            if !(&y % &next).is_zero() {
                break;
            }
            powers.push(next);
        }
        for (i, pw) in powers.iter().enumerate().rev() {
            loop {
                let (q, r) = y.div_rem(pw);
                if !r.is_zero() {
                    break;
                }
                y = q;
                v += 1u64 << i;
            }
        }
        Some(v)
    }

    /// p-adic valuation of a nonzero rational; `None` for zero.
    pub fn rational_valuation(self, q: &BigRational) -> Option<i64> {
        let vn = self.int_valuation(q.numer())? as i64;
        let vd = self.int_valuation(q.denom()).unwrap_or(0) as i64;
        Some(vn - vd)
    }

    /// Splits a nonzero rational as `p^v * unit`, returning `(v, unit)`.
    pub fn split(self, q: &BigRational) -> Option<(i64, BigRational)> {
        let vn = self.int_valuation(q.numer())?;
        let vd = self.int_valuation(q.denom()).unwrap_or(0);
        let num = q.numer() / self.pow(vn);
        let den = q.denom() / self.pow(vd);
        Some((vn as i64 - vd as i64, BigRational::new_raw(num, den)))
    }

    /// Symmetric residue of `x` modulo `m` (m odd), in `[-(m-1)/2, (m-1)/2]`.
    pub fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
        let r = x.mod_floor(m);
        if (&r << 1) > *m {
            r - m
        } else {
            r
        }
    }

    /// Balanced representative of `q` modulo `p^n` (absolute precision `n`).
    ///
    /// The result has denominator a power of `p` and its balanced digits
    /// coincide with those of `q` at every index below `n`.
    pub fn reduce(self, q: &BigRational, n: i64) -> BigRational {
        let Some((v, unit)) = self.split(q) else {
            return BigRational::zero();
        };
        if v >= n {
            return BigRational::zero();
        }
        let m = self.pow((n - v) as u64);
        let inv = unit
            .denom()
            .modinv(&m)
            .expect("p-unit denominators are invertible modulo p^m");
        let r = Self::symmetric_mod(&(unit.numer() * inv), &m);
        BigRational::from_integer(r) * self.pow_rational(v)
    }

    /// Euclidean absolute value `|q|_∞`.
    pub fn abs_rational(q: &BigRational) -> BigRational {
        q.abs()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Prime::new(10007).unwrap().get(), 10007);
    }

    #[test]
    fn int_valuation_large_power() {
        let p = Prime::new(5).unwrap();
        let x = p.pow(1234) * BigInt::from(7);
        assert_eq!(p.int_valuation(&x), Some(1234));
        assert_eq!(p.int_valuation(&BigInt::from(50)), Some(2));
        assert_eq!(p.int_valuation(&BigInt::from(-3)), Some(0));
        assert_eq!(p.int_valuation(&BigInt::zero()), None);
        for e in 0..70u64 {
            let x = p.pow(e) * BigInt::from(-12);
            assert_eq!(p.int_valuation(&x), Some(e));
        }
    }

    #[test]
    fn reduce_matches_balanced_range() {
        let p = Prime::new(5).unwrap();
        let q = BigRational::new(BigInt::from(132), BigInt::from(5));
        assert_eq!(
            p.reduce(&q, 1),
            BigRational::new(BigInt::from(7), BigInt::from(5))
        );
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        // 1/3 ≡ 2 (mod 5)
        assert_eq!(p.reduce(&third, 1), BigRational::from_integer(2.into()));
    }
}
