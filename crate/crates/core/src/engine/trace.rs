//! Residuals `V_n = C_n α − A_n`, `C_n β − B_n` and the full per-step trace.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::Zero;

use super::{Convergents, Coord, Expansion, Status, TildeTable};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Prime, Repr, Valuation};

/// A coordinate of the limit pair, as a fraction `num / den`.
///
/// The fraction need not be reduced. A truncated limit is only known
/// modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    num: BigInt,
    den: BigInt,
    den_valuation: i64,
    precision: Option<i64>,
}

impl Limit {
    pub fn exact(prime: Prime, num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let den_valuation = prime.int_valuation(&den).expect("nonzero") as i64;
        Ok(Limit {
            num,
            den,
            den_valuation,
            precision: None,
        })
    }

    pub fn from_scalar(x: &PAdicScalar) -> Self {
        let p = x.prime();
        let q = x.approx();
        let mut l = Self::exact(p, q.numer().clone(), q.denom().clone()).expect("nonzero denominator");
        if let Repr::Truncated { precision, .. } = x.repr() {
            l.precision = Some(*precision);
        }
        l
    }

    /// The proxy limit `Q_N` of an expansion: `T^X_N / T^C_N`.
    pub fn proxy(conv: &Convergents, c: Coord, n: i64) -> Result<Self> {
        Self::exact(
            conv.prime(),
            conv.scaled(c, n)?.clone(),
            conv.scaled(Coord::C, n)?.clone(),
        )
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn valuation(&self, prime: Prime) -> Valuation {
        let v = prime.int_valuation(&self.num).map(|v| v as i64 - self.den_valuation);
        match (v, self.precision) {
            (Some(v), Some(n)) if v >= n => Valuation::AtLeast(n),
            (Some(v), _) => Valuation::Finite(v),
            (None, Some(n)) => Valuation::AtLeast(n),
            (None, None) => Valuation::Infinite,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn to_scalar(&self, prime: Prime) -> PAdicScalar {
        match self.precision {
            None => PAdicScalar::exact(prime, self.to_rational()),
            Some(n) => PAdicScalar::truncated(prime, &self.to_rational(), n),
        }
    }
}

/// `ν_p(C_n · limit − X_n)`.
///
/// For a truncated limit the value is certified only below
/// `N + ν(C_n)`; beyond that the result is `AtLeast(N + ν(C_n))`.
pub fn residual_valuation(conv: &Convergents, c: Coord, n: i64, limit: &Limit) -> Result<Valuation> {
    let p = conv.prime();
    let tc = conv.scaled(Coord::C, n)?;
    let tx = conv.scaled(c, n)?;
    let e = conv.scale(n)? as i64;
    let w = tc * &limit.num - tx * &limit.den;
    let computed = p.int_valuation(&w).map(|v| v as i64 - e - limit.den_valuation);
    let Some(prec) = limit.precision else {
        return Ok(computed.map_or(Valuation::Infinite, Valuation::Finite));
    };
    let Some(vc) = p.int_valuation(tc).map(|v| v as i64 - e) else {
        // C_n = 0: the residual is −X_n exactly
        return Ok(computed.map_or(Valuation::Infinite, Valuation::Finite));
    };
    let horizon = prec + vc;
    match computed {
        Some(v) if v < horizon => Ok(Valuation::Finite(v)),
        _ => Ok(Valuation::AtLeast(horizon)),
    }
}

/// `V_n` as a p-adic scalar (exact for exact limits).
pub fn residual_value(conv: &Convergents, c: Coord, n: i64, limit: &Limit) -> Result<PAdicScalar> {
    let p = conv.prime();
    let cn = PAdicScalar::exact(p, conv.value(Coord::C, n)?);
    let xn = PAdicScalar::exact(p, conv.value(c, n)?);
    cn.mul(&limit.to_scalar(p))?.sub(&xn)
}

/// Everything known about one run, indexed as in the recurrences.
#[derive(Debug, Clone)]
pub struct ExpansionTrace {
    pub input: String,
    pub expansion: Expansion,
    pub convergents: Convergents,
    pub tilde: TildeTable,
    pub alpha: Limit,
    pub beta: Limit,
    /// `(ν(V^α_n), ν(V^β_n))` at offset `n + 2`.
    residuals: Vec<(Valuation, Valuation)>,
}

impl ExpansionTrace {
    pub fn new(input: impl Into<String>, expansion: Expansion, alpha: Limit, beta: Limit) -> Result<Self> {
        let convergents = Convergents::new(&expansion);
        let tilde = TildeTable::new(&expansion, &convergents);
        let residuals = (-2..expansion.len() as i64)
            .map(|n| {
                Ok((
                    residual_valuation(&convergents, Coord::A, n, &alpha)?,
                    residual_valuation(&convergents, Coord::B, n, &beta)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpansionTrace {
            input: input.into(),
            expansion,
            convergents,
            tilde,
            alpha,
            beta,
            residuals,
        })
    }

    /// Trace of `(α, β)` with the limits taken from the inputs themselves.
    pub fn from_inputs(input: impl Into<String>, alpha: &PAdicScalar, beta: &PAdicScalar, expansion: Expansion) -> Result<Self> {
        Self::new(input, expansion, Limit::from_scalar(alpha), Limit::from_scalar(beta))
    }

    /// Trace of the first `len` pairs of `deep`, using `Q_{deep.len()-1}`
    /// as the limit.
    pub fn with_proxy(input: impl Into<String>, deep: &Expansion, len: usize) -> Result<Self> {
        let conv = Convergents::new(deep);
        let last = deep.len() as i64 - 1;
        let alpha = Limit::proxy(&conv, Coord::A, last)?;
        let beta = Limit::proxy(&conv, Coord::B, last)?;
        drop(conv);
        Self::new(input, deep.truncate(len), alpha, beta)
    }

    pub fn prime(&self) -> Prime {
        self.expansion.prime()
    }

    pub fn len(&self) -> usize {
        self.expansion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansion.is_empty()
    }

    pub fn status(&self) -> Status {
        self.expansion.status()
    }

    /// `(ν(V^α_n), ν(V^β_n))` for `-2 ≤ n < len`.
    pub fn residual_valuations(&self, n: i64) -> Result<(Valuation, Valuation)> {
        let i = n + 2;
        if i < 0 || i as usize >= self.residuals.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                available: self.len(),
            });
        }
        Ok(self.residuals[i as usize])
    }

    /// `min(ν(V^α_n), ν(V^β_n))`, or `None` if not certified.
    pub fn min_residual(&self, n: i64) -> Result<Option<Valuation>> {
        let (va, vb) = self.residual_valuations(n)?;
        Ok(va.min(vb))
    }

    /// `V^α_n`, `V^β_n` as scalars.
    pub fn residuals(&self, n: i64) -> Result<(PAdicScalar, PAdicScalar)> {
        Ok((
            residual_value(&self.convergents, Coord::A, n, &self.alpha)?,
            residual_value(&self.convergents, Coord::B, n, &self.beta)?,
        ))
    }

    /// `ν(α − Q^α_n)` and `ν(β − Q^β_n)`, i.e. `ν(V_n) + K_n`, for `n ≥ 0`.
    pub fn approximation_valuations(&self, n: i64) -> Result<(Valuation, Valuation)> {
        let (va, vb) = self.residual_valuations(n)?;
        let kn = self.expansion.big_k(n);
        Ok((va.shift(kn), vb.shift(kn)))
    }

    /// Radius exponent `2K_n` of the ball on which digits `0..=n` are constant.
    pub fn certified_prefix_radius(&self, n: usize) -> i64 {
        certified_prefix_radius(&self.expansion, n)
    }

    /// Checks the step identity
    /// `α_{n+1} V_n = −β_{n+1} V_{n-1} − V_{n-2}` for both coordinates.
    ///
    /// Needs the complete quotients; returns `Ok(None)` when `α_{n+1}` is
    /// not available and `Ok(Some(false))` on failure.
    pub fn step_identity(&self, n: i64) -> Result<Option<bool>> {
        let Some(qs) = self.expansion.quotients() else {
            return Err(Error::QuotientsDropped);
        };
        if n < 0 || (n + 1) as usize >= qs.len() {
            return Ok(None);
        }
        let (an, bn) = &qs[(n + 1) as usize];
        let (v0a, v0b) = self.residuals(n)?;
        let (v1a, v1b) = self.residuals(n - 1)?;
        let (v2a, v2b) = self.residuals(n - 2)?;
        let check = |v0: &PAdicScalar, v1: &PAdicScalar, v2: &PAdicScalar| -> Result<Option<bool>> {
            let lhs = an.mul(v0)?;
            let rhs = bn.mul(v1)?.neg().sub(v2)?;
            let d = lhs.sub(&rhs)?;
            Ok(match d.precision() {
                None => Some(d.is_exact_zero()),
                Some(_) => {
                    if d.is_indistinguishable_from_zero() {
                        Some(true)
                    } else {
                        Some(false)
                    }
                }
            })
        };
        let a = check(&v0a, &v1a, &v2a)?;
        let b = check(&v0b, &v1b, &v2b)?;
        Ok(match (a, b) {
            (Some(x), Some(y)) => Some(x && y),
            _ => None,
        })
    }

    /// `(t, u, v) = p^{K_n + δ} (A_n, B_n, C_n)` with
    /// `δ = max(0, −ν(α), −ν(β))`, which are integers for `n ≥ 0`.
    pub fn normalized_triple(&self, n: i64) -> Result<[BigInt; 3]> {
        let p = self.prime();
        let delta = self.delta();
        let shift = self.expansion.big_k(n) + delta;
        let e = self.convergents.scale(n)? as i64;
        let mut out: [BigInt; 3] = Default::default();
        for (slot, c) in Coord::ALL.iter().enumerate() {
            let t = self.convergents.scaled(*c, n)?;
            let d = shift - e;
            out[slot] = if d >= 0 {
                t * p.pow(d as u64)
            } else {
                let (q, r) = t.div_rem(&p.pow((-d) as u64));
                if !r.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "p^(K_n+δ) X_n is not an integer at n = {n}"
                    )));
                }
                q
            };
        }
        Ok(out)
    }

    /// `δ = max(0, −ν(α), −ν(β))` from the limit pair.
    pub fn delta(&self) -> i64 {
        let p = self.prime();
        let v = |l: &Limit| -> i64 { l.valuation(p).finite().unwrap_or(0) };
        0.max(-v(&self.alpha)).max(-v(&self.beta))
    }
}

pub fn certified_prefix_radius(e: &Expansion, n: usize) -> i64 {
    2 * e.big_k(n as i64)
}
