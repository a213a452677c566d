//! Digit-by-digit reference expansions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::Prime;

fn count_factors(mut x: BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

fn naive_valuation(x: &BigRational, p: &BigInt) -> i64 {
    count_factors(x.numer().clone(), p) - count_factors(x.denom().clone(), p)
}

/// Balanced digits `x_lo..=x_hi` by repeated division: at each index the
/// digit is found by trying every value in `[-(p-1)/2, (p-1)/2]`.
pub fn naive_balanced_expand(x: &BigRational, p: Prime, lo: i64, hi: i64) -> Result<Vec<i64>> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let width = (hi - lo + 1) as usize;
    if x.is_zero() {
        return Ok(vec![0; width]);
    }
    let pb = BigInt::from(p.get());
    let v = naive_valuation(x, &pb);
    if v < lo {
        return Err(Error::DigitsBelowWindow { valuation: v, lo });
    }
    let pr = BigRational::from_integer(pb.clone());
    let mut y = x.clone();
    for _ in 0..lo.max(0) {
        y /= &pr;
    }
    for _ in 0..(-lo).max(0) {
        y *= &pr;
    }
    let h = (p.get() / 2) as i64;
    let mut out = Vec::with_capacity(width);
    for _ in 0..width {
        let d = (-h..=h)
            .find(|d| (y.clone() - BigRational::from_integer(BigInt::from(*d))).numer().is_multiple_of(&pb))
            .expect("a p-integral value has a residue digit");
        y = (y - BigRational::from_integer(BigInt::from(d))) / &pr;
        out.push(d);
    }
    Ok(out)
}

/// `s(x)`: the sum of the balanced digits of `x` at indices `≤ 0`.
pub fn naive_s(x: &BigRational, p: Prime) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let v = naive_valuation(x, &BigInt::from(p.get()));
    if v > 0 {
        return BigRational::zero();
    }
    let digits = naive_balanced_expand(x, p, v, 0).expect("window starts at the valuation");
    let pr = BigRational::from_integer(BigInt::from(p.get()));
    let mut weight = BigRational::one();
    for _ in 0..(-v) {
        weight /= &pr;
    }
    let mut acc = BigRational::zero();
    for d in digits {
        acc += &weight * BigRational::from_integer(BigInt::from(d));
        weight *= &pr;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_cases() {
        let p = Prime::new(5).unwrap();
        assert_eq!(naive_balanced_expand(&q(7, 1), p, 0, 1).unwrap(), vec![2, 1]);
        assert_eq!(naive_balanced_expand(&q(0, 1), p, 0, 3).unwrap(), vec![0; 4]);
        assert_eq!(naive_s(&q(32, 5), p), q(7, 5));
        assert_eq!(naive_s(&q(26, 5), p), q(1, 5));
        assert!(matches!(
            naive_balanced_expand(&q(1, 5), p, 0, 2),
            Err(Error::DigitsBelowWindow { valuation: -1, lo: 0 })
        ));
    }
}
