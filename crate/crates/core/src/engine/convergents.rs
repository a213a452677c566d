//! Convergent numerators and denominators in scaled-integer form.
//!
//! With `e0 = max(exponent(a_0), exponent(b_0))` and `E_n = e0 + K_n`
//! (`E_n = e0` for `n < 0`), every `X_n ∈ {A_n, B_n, C_n}` is `T_n / p^{E_n}`
//! for an integer `T_n`, and
//!
//! `T_n = mant(a_n) T_{n-1} + b_n p^{k_n+k_{n-1}} T_{n-2} + p^{k_n+k_{n-1}+k_{n-2}} T_{n-3}`
//!
//! with integral coefficients. No gcd is ever taken.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Expansion;
use crate::error::{Error, Result};
use crate::padic::{Prime, YElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    A,
    B,
    C,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::A, Coord::B, Coord::C];

    fn idx(self) -> usize {
        self as usize
    }
}

/// `y · p^shift` as an integer, for `y ∈ Y` with `exponent(y) ≤ shift`.
pub(crate) fn scaled_digit(p: Prime, y: &YElem, shift: i64) -> BigInt {
    let s = shift - y.exponent() as i64;
    debug_assert!(s >= 0, "digit does not become integral");
    y.mantissa() * p.pow(s as u64)
}

/// Strips the common `p`-power from `t / p^e` and returns it reduced.
pub(crate) fn unscale(p: Prime, t: &BigInt, e: u64) -> BigRational {
    if t.is_zero() {
        return BigRational::zero();
    }
    let v = p.int_valuation(t).expect("nonzero").min(e);
    let num = if v == 0 { t.clone() } else { t / p.pow(v) };
    BigRational::new_raw(num, p.pow(e - v))
}

#[derive(Debug, Clone)]
pub struct Convergents {
    prime: Prime,
    /// `E_n` at offset `n + 2`.
    scale: Vec<u64>,
    /// `T_n` per coordinate, at offset `n + 2`.
    t: [Vec<BigInt>; 3],
}

impl Convergents {
    pub fn new(e: &Expansion) -> Self {
        let p = e.prime();
        let len = e.len();
        if len == 0 {
            return Convergents {
                prime: p,
                scale: vec![0, 0],
                t: [
                    vec![BigInt::zero(), BigInt::one()],
                    vec![BigInt::one(), BigInt::zero()],
                    vec![BigInt::zero(), BigInt::zero()],
                ],
            };
        }
        let e0 = e.a()[0].exponent().max(e.b()[0].exponent()) as u64;
        let mut scale = vec![e0, e0];
        for n in 0..len as i64 {
            scale.push(e0 + e.big_k(n) as u64);
        }

        // per-step integer coefficients of T_{n-1}, T_{n-2}, T_{n-3}
        let coeffs: Vec<[BigInt; 3]> = (1..len as i64)
            .map(|n| {
                let kn = e.k(n);
                let k1 = e.k(n - 1);
                let k2 = e.k(n - 2);
                [
                    e.a()[n as usize].mantissa().clone(),
                    scaled_digit(p, &e.b()[n as usize], kn + k1),
                    p.pow((kn + k1 + k2) as u64),
                ]
            })
            .collect();

        let pe = p.pow(e0);
        let row0 = |y: &YElem| scaled_digit(p, y, e0 as i64);
        let seeds = [
            [BigInt::zero(), pe.clone(), row0(&e.a()[0])],
            [pe.clone(), BigInt::zero(), row0(&e.b()[0])],
            [BigInt::zero(), BigInt::zero(), pe],
        ];

        let run = |seed: &[BigInt; 3]| -> Vec<BigInt> {
            let mut v: Vec<BigInt> = seed.to_vec();
            v.reserve(len - 1);
            for c in &coeffs {
                let m = v.len();
                let next = &c[0] * &v[m - 1] + &c[1] * &v[m - 2] + &c[2] * &v[m - 3];
                v.push(next);
            }
            v
        };
        let (ta, (tb, tc)) = rayon::join(
            || run(&seeds[0]),
            || rayon::join(|| run(&seeds[1]), || run(&seeds[2])),
        );
        Convergents {
            prime: p,
            scale,
            t: [ta, tb, tc],
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Number of rows with `n ≥ 0`.
    pub fn len(&self) -> usize {
        self.scale.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn offset(&self, n: i64) -> Result<usize> {
        let i = n + 2;
        if i < 0 || i as usize >= self.scale.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                available: self.len(),
            });
        }
        Ok(i as usize)
    }

    /// `E_n`, the power of `p` clearing denominators at row `n`.
    pub fn scale(&self, n: i64) -> Result<u64> {
        Ok(self.scale[self.offset(n)?])
    }

    /// The integer `T_n = p^{E_n} X_n`.
    pub fn scaled(&self, c: Coord, n: i64) -> Result<&BigInt> {
        Ok(&self.t[c.idx()][self.offset(n)?])
    }

    pub fn value(&self, c: Coord, n: i64) -> Result<BigRational> {
        let i = self.offset(n)?;
        Ok(unscale(self.prime, &self.t[c.idx()][i], self.scale[i]))
    }

    /// `(A_n, B_n, C_n)` for `-2 ≤ n < len`.
    pub fn triple(&self, n: i64) -> Result<(BigRational, BigRational, BigRational)> {
        Ok((
            self.value(Coord::A, n)?,
            self.value(Coord::B, n)?,
            self.value(Coord::C, n)?,
        ))
    }

    /// `Q_n = (A_n / C_n, B_n / C_n)`, for `0 ≤ n < len`.
    pub fn approximant(&self, n: i64) -> Result<(BigRational, BigRational)> {
        let c = self.scaled(Coord::C, n)?;
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok((
            BigRational::new(self.scaled(Coord::A, n)?.clone(), c.clone()),
            BigRational::new(self.scaled(Coord::B, n)?.clone(), c.clone()),
        ))
    }

    /// `ν_p(X_n)`, `None` for zero.
    pub fn valuation(&self, c: Coord, n: i64) -> Result<Option<i64>> {
        let i = self.offset(n)?;
        Ok(self
            .prime
            .int_valuation(&self.t[c.idx()][i])
            .map(|v| v as i64 - self.scale[i] as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;
    use crate::padic::PAdicScalar;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn worked_convergents() {
        let p = Prime::new(5).unwrap();
        let e = expand(&PAdicScalar::exact(p, q(32, 5)), &PAdicScalar::exact(p, q(26, 5)), 10).unwrap();
        let c = Convergents::new(&e);
        assert_eq!(c.triple(0).unwrap(), (q(7, 5), q(1, 5), q(1, 1)));
        assert_eq!(c.triple(1).unwrap(), (q(32, 25), q(26, 25), q(1, 5)));
        assert_eq!(c.triple(-1).unwrap(), (q(1, 1), q(0, 1), q(0, 1)));
        assert_eq!(c.triple(-2).unwrap(), (q(0, 1), q(1, 1), q(0, 1)));
        assert_eq!(c.approximant(1).unwrap(), (q(32, 5), q(26, 5)));
        assert_eq!(c.valuation(Coord::C, 1).unwrap(), Some(-1));
        assert!(matches!(c.triple(2), Err(Error::IndexOutOfRange { index: 2, .. })));
        assert!(c.triple(-3).is_err());
    }
}
