use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{s_function, PAdicScalar, Prime, Repr, YElem};

/// How an expansion run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// The algorithm stopped exactly after this many digit pairs.
    Finite(usize),
    /// The depth limit was reached first.
    DepthLimited,
    /// A step could not be certified at the available precision.
    PrecisionExhausted,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Finite(n) => write!(f, "Finite({n})"),
            Status::DepthLimited => write!(f, "DepthLimited"),
            Status::PrecisionExhausted => write!(f, "PrecisionExhausted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Continue {
        a: YElem,
        b: YElem,
        alpha: PAdicScalar,
        beta: PAdicScalar,
    },
    /// `β_k − b_k` is exactly zero; the pair `(a_k, b_k)` is the last one.
    Terminated { a: YElem, b: YElem },
}

/// One step of the Jacobi–Perron map.
pub fn jp_step(alpha: &PAdicScalar, beta: &PAdicScalar) -> Result<StepOutcome> {
    let p = alpha.prime();
    let a = s_function(alpha)?;
    let b = s_function(beta)?;
    let d = beta.sub(&PAdicScalar::exact(p, b.value(p)))?;
    if d.is_exact_zero() {
        return Ok(StepOutcome::Terminated { a, b });
    }
    if d.is_indistinguishable_from_zero() {
        return Err(Error::PrecisionExhausted(format!(
            "β − b is zero modulo p^{}",
            d.precision().unwrap_or_default()
        )));
    }
    let alpha_next = d.inv()?;
    let beta_next = alpha.sub(&PAdicScalar::exact(p, a.value(p)))?.mul(&alpha_next)?;
    Ok(StepOutcome::Continue {
        a,
        b,
        alpha: alpha_next,
        beta: beta_next,
    })
}

/// The partial quotients of a run, plus what is needed to interpret them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    prime: Prime,
    a: Vec<YElem>,
    b: Vec<YElem>,
    status: Status,
    quotients: Option<Vec<(PAdicScalar, PAdicScalar)>>,
    input_precision: Option<i64>,
    certified_prefix: usize,
    ks: Vec<i64>,
    big_k: Vec<i64>,
}

impl Expansion {
    fn assemble(
        prime: Prime,
        a: Vec<YElem>,
        b: Vec<YElem>,
        status: Status,
        quotients: Option<Vec<(PAdicScalar, PAdicScalar)>>,
        input_precision: Option<i64>,
    ) -> Self {
        let ks: Vec<i64> = a
            .iter()
            .enumerate()
            .map(|(i, x)| if i == 0 { 0 } else { x.exponent() as i64 })
            .collect();
        let mut big_k = Vec::with_capacity(ks.len());
        let mut acc = 0;
        for k in &ks {
            acc += k;
            big_k.push(acc);
        }
        let certified_prefix = match input_precision {
            None => a.len(),
            Some(n) => big_k.iter().take_while(|&&kk| n > 2 * kk).count(),
        };
        Expansion {
            prime,
            a,
            b,
            status,
            quotients,
            input_precision,
            certified_prefix,
            ks,
            big_k,
        }
    }

    /// An expansion given directly by its digits. Digits at `n ≥ 1` must
    /// satisfy `ν(a_n) < 0` and `ν(b_n) > ν(a_n)`.
    pub fn from_digits(prime: Prime, a: Vec<YElem>, b: Vec<YElem>, status: Status) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidInput(
                "digit sequences must be nonempty and of equal length".into(),
            ));
        }
        for (n, (x, y)) in a.iter().zip(&b).enumerate() {
            if !x.is_valid(prime) || !y.is_valid(prime) {
                return Err(Error::InvalidInput(format!("digit pair {n} is not in Y")));
            }
            if n >= 1 && (x.exponent() == 0 || y.exponent() >= x.exponent()) {
                return Err(Error::InvalidInput(format!(
                    "digit pair {n} violates |a_n|_p > 1 and |b_n|_p < |a_n|_p"
                )));
            }
        }
        Ok(Self::assemble(prime, a, b, status, None, None))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Number of digit pairs.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn a(&self) -> &[YElem] {
        &self.a
    }

    pub fn b(&self) -> &[YElem] {
        &self.b
    }

    /// `k_n = ν(1/a_n)` for `n ≥ 1`; zero for `n ≤ 0`.
    pub fn k(&self, n: i64) -> i64 {
        if n <= 0 {
            0
        } else {
            self.ks[n as usize]
        }
    }

    /// `K_n = k_1 + ... + k_n`, zero for `n ≤ 0`.
    pub fn big_k(&self, n: i64) -> i64 {
        if n <= 0 {
            0
        } else {
            self.big_k[n as usize]
        }
    }

    /// `h_n = ν(b_n / a_n)` for `n ≥ 1`, `None` meaning `+∞` (`b_n = 0`).
    pub fn h(&self, n: usize) -> Option<i64> {
        self.b[n].valuation().map(|v| v + self.k(n as i64))
    }

    /// Complete quotients `(α_n, β_n)`, when retained.
    pub fn quotients(&self) -> Option<&[(PAdicScalar, PAdicScalar)]> {
        self.quotients.as_deref()
    }

    pub fn drop_quotients(&mut self) {
        self.quotients = None;
    }

    /// Smallest absolute precision among the inputs, `None` if both exact.
    pub fn input_precision(&self) -> Option<i64> {
        self.input_precision
    }

    /// Number of leading digit pairs shared by every pair in the input ball,
    /// i.e. indices `n` with `N > 2K_n`.
    pub fn certified_prefix(&self) -> usize {
        self.certified_prefix
    }

    /// Keeps the first `len` pairs (a deeper run truncated to a shorter one).
    pub fn truncate(&self, len: usize) -> Expansion {
        let len = len.min(self.len());
        let status = match self.status {
            Status::Finite(l) if l == len => self.status,
            _ => Status::DepthLimited,
        };
        let quotients = self
            .quotients
            .as_ref()
            .map(|q| q[..q.len().min(len + 1)].to_vec());
        Self::assemble(
            self.prime,
            self.a[..len].to_vec(),
            self.b[..len].to_vec(),
            status,
            quotients,
            self.input_precision,
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExpandOptions {
    pub max_depth: usize,
    pub retain_quotients: bool,
}

impl ExpandOptions {
    pub fn depth(max_depth: usize) -> Self {
        ExpandOptions {
            max_depth,
            retain_quotients: true,
        }
    }
}

/// Iterates [`jp_step`] from `(α, β)` for at most `max_depth` digit pairs.
pub fn expand(alpha: &PAdicScalar, beta: &PAdicScalar, max_depth: usize) -> Result<Expansion> {
    expand_with(alpha, beta, ExpandOptions::depth(max_depth))
}

pub fn expand_with(alpha: &PAdicScalar, beta: &PAdicScalar, opts: ExpandOptions) -> Result<Expansion> {
    let p = alpha.prime();
    if beta.prime() != p {
        return Err(Error::PrimeMismatch(p.get(), beta.prime().get()));
    }
    let input_precision = match (alpha.repr(), beta.repr()) {
        (Repr::Exact(_), Repr::Exact(_)) => None,
        _ => Some(
            alpha
                .precision()
                .unwrap_or(i64::MAX)
                .min(beta.precision().unwrap_or(i64::MAX)),
        ),
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut quotients = opts.retain_quotients.then(Vec::new);
    let mut cur = (alpha.clone(), beta.clone());
    let mut status = Status::DepthLimited;
    for depth in 0..opts.max_depth {
        if let Some(q) = quotients.as_mut() {
            q.push(cur.clone());
        }
        match jp_step(&cur.0, &cur.1) {
            Ok(StepOutcome::Terminated { a: x, b: y }) => {
                a.push(x);
                b.push(y);
                status = Status::Finite(depth + 1);
                break;
            }
            Ok(StepOutcome::Continue {
                a: x,
                b: y,
                alpha,
                beta,
            }) => {
                a.push(x);
                b.push(y);
                cur = (alpha, beta);
            }
            Err(Error::PrecisionExhausted(_)) | Err(Error::InsufficientPrecision(_)) => {
                if let Some(q) = quotients.as_mut() {
                    q.pop();
                }
                status = Status::PrecisionExhausted;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if status == Status::DepthLimited {
        if let Some(q) = quotients.as_mut() {
            q.push(cur);
        }
    }
    Ok(Expansion::assemble(p, a, b, status, quotients, input_precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn worked_steps() {
        let p = Prime::new(5).unwrap();
        let s = jp_step(&PAdicScalar::exact(p, q(32, 5)), &PAdicScalar::exact(p, q(26, 5))).unwrap();
        let StepOutcome::Continue { a, b, alpha, beta } = s else {
            panic!("expected a continuing step")
        };
        assert_eq!(a.value(p), q(7, 5));
        assert_eq!(b.value(p), q(1, 5));
        assert_eq!(alpha.approx(), &q(1, 5));
        assert_eq!(beta.approx(), &q(1, 1));
        let t = jp_step(&alpha, &beta).unwrap();
        assert!(matches!(t, StepOutcome::Terminated { .. }));
    }

    #[test]
    fn worked_expansion() {
        let p = Prime::new(5).unwrap();
        let e = expand(&PAdicScalar::exact(p, q(32, 5)), &PAdicScalar::exact(p, q(26, 5)), 10).unwrap();
        assert_eq!(e.status(), Status::Finite(2));
        let a: Vec<_> = e.a().iter().map(|x| x.value(p)).collect();
        let b: Vec<_> = e.b().iter().map(|x| x.value(p)).collect();
        assert_eq!(a, vec![q(7, 5), q(1, 5)]);
        assert_eq!(b, vec![q(1, 5), q(1, 1)]);
        assert_eq!(e.big_k(1), 1);
        assert_eq!(e.certified_prefix(), 2);
    }

    #[test]
    fn alphabet_inputs_stop_at_once() {
        let p = Prime::new(7).unwrap();
        let e = expand(&PAdicScalar::exact(p, q(3, 7)), &PAdicScalar::exact(p, q(-1, 1)), 5).unwrap();
        assert_eq!(e.status(), Status::Finite(1));
    }

    #[test]
    fn truncated_zero_is_not_termination() {
        let p = Prime::new(5).unwrap();
        let alpha = PAdicScalar::truncated(p, &q(3, 1), 4);
        let beta = PAdicScalar::truncated(p, &q(1, 1), 4);
        let e = expand(&alpha, &beta, 5).unwrap();
        assert_eq!(e.status(), Status::PrecisionExhausted);
        assert_eq!(e.len(), 0);
    }

    #[test]
    fn depth_zero() {
        let p = Prime::new(5).unwrap();
        let e = expand(&PAdicScalar::exact(p, q(1, 3)), &PAdicScalar::exact(p, q(1, 7)), 0).unwrap();
        assert_eq!(e.status(), Status::DepthLimited);
        assert!(e.is_empty());
    }
}
