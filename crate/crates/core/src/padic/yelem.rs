use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Prime;
use crate::error::{Error, Result};

/// An element `mantissa / p^exponent` of `Y = Z[1/p] ∩ (-p/2, p/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YElem {
    mantissa: BigInt,
    exponent: u32,
}

impl YElem {
    pub fn zero() -> Self {
        YElem {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    /// Builds from the raw pair, normalizing factors of `p` out of the
    /// mantissa and checking the Euclidean bound.
    pub fn new(prime: Prime, mantissa: BigInt, exponent: u32) -> Result<Self> {
        let mut m = mantissa;
        let mut e = exponent;
        if m.is_zero() {
            return Ok(Self::zero());
        }
        let p = prime.big();
        while e > 0 {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            m = q;
            e -= 1;
        }
        // |m / p^e| < p/2  <=>  2|m| < p^{e+1}
        if (m.abs() << 1) >= prime.pow(e as u64 + 1) {
            return Err(Error::NotInAlphabet(format!("{m}/{}^{e}", prime.get())));
        }
        Ok(YElem {
            mantissa: m,
            exponent: e,
        })
    }

    pub fn from_rational(prime: Prime, q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let den = q.denom();
        let Some(e) = prime.int_valuation(den) else {
            unreachable!("denominators are nonzero")
        };
        if prime.pow(e) != *den {
            return Err(Error::NotInAlphabet(q.to_string()));
        }
        let e = u32::try_from(e).map_err(|_| Error::NotInAlphabet(q.to_string()))?;
        Self::new(prime, q.numer().clone(), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn value(&self, prime: Prime) -> BigRational {
        BigRational::new_raw(self.mantissa.clone(), prime.pow(self.exponent as u64))
    }

    /// `ν_p`, `None` for zero. Nonzero elements have valuation `-exponent`.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(-(self.exponent as i64))
        }
    }

    /// Whether the stored pair satisfies the alphabet invariants.
    pub fn is_valid(&self, prime: Prime) -> bool {
        if self.is_zero() {
            return self.exponent == 0;
        }
        if self.exponent > 0 && (&self.mantissa % prime.big()).is_zero() {
            return false;
        }
        (self.mantissa.abs() << 1) < prime.pow(self.exponent as u64 + 1)
    }
}

impl fmt::Display for YElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/p^{}", self.mantissa, self.exponent)
        }
    }
}
