//! Simple-root Hensel lifting for integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{PAdicScalar, Prime};
use crate::error::{Error, Result};

/// `c0 + c1 X + ... + cd X^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A simple root of `poly` modulo `p`, to be lifted to precision `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicInput {
    pub prime: Prime,
    pub poly: IntPoly,
    pub seed: BigInt,
    pub precision: i64,
}

impl AlgebraicInput {
    pub fn new(prime: Prime, poly: IntPoly, seed: BigInt, precision: i64) -> Result<Self> {
        if precision < 1 {
            return Err(Error::InvalidInput(format!(
                "precision must be at least 1, got {precision}"
            )));
        }
        let p = prime.big();
        let seed = seed.mod_floor(&p);
        if !poly.eval(&seed).mod_floor(&p).is_zero() {
            return Err(Error::NotARoot);
        }
        if poly.derivative().eval(&seed).mod_floor(&p).is_zero() {
            return Err(Error::NonSimpleRoot);
        }
        Ok(AlgebraicInput {
            prime,
            poly,
            seed,
            precision,
        })
    }
}

/// Newton iteration with doubling precision. The result `r` satisfies
/// `poly(r) ≡ 0 (mod p^N)` and `r ≡ seed (mod p)`.
pub fn hensel_lift(input: &AlgebraicInput) -> PAdicScalar {
    let p = input.prime;
    let dpoly = input.poly.derivative();
    let mut r = input.seed.clone();
    let mut prec: i64 = 1;
    while prec < input.precision {
        prec = (2 * prec).min(input.precision);
        let m = p.pow(prec as u64);
        let d = dpoly.eval(&r).mod_floor(&m);
        let dinv = d.modinv(&m).expect("simple root: derivative is a unit");
        r = (&r - input.poly.eval(&r) * dinv).mod_floor(&m);
    }
    PAdicScalar::truncated(p, &BigRational::from_integer(r), input.precision)
}

/// Convenience check that `ν_p(poly(r)) ≥ N` for a lifted root.
pub fn residual_valuation_ok(input: &AlgebraicInput, r: &PAdicScalar) -> bool {
    let v = input.poly.eval_rational(r.approx());
    if v.is_zero() {
        return true;
    }
    input
        .prime
        .rational_valuation(&v)
        .is_some_and(|x| x >= input.precision)
}
