//! Text literals for p-adic inputs.
//!
//! * `num/den` or `num`: an exact rational.
//! * `root:c0,c1,...,cd@seed@N`: the root of `c0 + c1 X + ... + cd X^d`
//!   congruent to `seed` mod `p`, known modulo `p^N`. It may be followed by
//!   a chain of `*q`, `+q`, `-q` with unsigned rationals `q`, applied left
//!   to right, e.g. `root:-6,0,1@1@50*2+3`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{hensel_lift, AlgebraicInput, IntPoly, PAdicScalar, Prime};
use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Formats as `num/den` (always with a denominator).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_scalar(s: &str, p: Prime) -> Result<PAdicScalar> {
    let s = s.trim();
    match s.strip_prefix("root:") {
        Some(rest) => parse_root(rest, p),
        None => Ok(PAdicScalar::exact(p, parse_rational(s)?)),
    }
}

fn parse_root(rest: &str, p: Prime) -> Result<PAdicScalar> {
    let mut parts = rest.splitn(3, '@');
    let (Some(coeffs), Some(seed), Some(tail)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Parse(format!(
            "expected root:<coeffs>@<seed>@<precision>, got {rest:?}"
        )));
    };
    let coeffs = coeffs
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let seed: BigInt = seed
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad seed {seed:?}")))?;

    let split = tail.find(['*', '+', '-']).unwrap_or(tail.len());
    let precision: i64 = tail[..split]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad precision {:?}", &tail[..split])))?;

    let input = AlgebraicInput::new(p, IntPoly::new(coeffs), seed, precision)?;
    let mut value = hensel_lift(&input);

    let mut ops = &tail[split..];
    while let Some(op) = ops.chars().next() {
        let body = &ops[1..];
        let end = body.find(['*', '+', '-']).unwrap_or(body.len());
        let q = PAdicScalar::exact(p, parse_rational(&body[..end])?);
        value = match op {
            '*' => value.mul(&q)?,
            '+' => value.add(&q)?,
            '-' => value.sub(&q)?,
            _ => unreachable!(),
        };
        ops = &body[end..];
    }
    Ok(value)
}
