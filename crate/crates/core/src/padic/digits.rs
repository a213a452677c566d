//! Balanced digit expansions and the s-function.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{PAdicScalar, Prime, Repr, YElem};
use crate::error::{Error, Result};

/// Balanced digits `x_lo, ..., x_hi` of `x`, each in `[-(p-1)/2, (p-1)/2]`,
/// with `x ≡ Σ x_j p^j (mod p^{hi+1})`.
///
/// Fails if `x` has nonzero digits below `lo`, since the window could not
/// represent it.
pub fn balanced_digits(x: &BigRational, p: Prime, lo: i64, hi: i64) -> Result<Vec<i64>> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let width = (hi - lo + 1) as usize;
    if x.is_zero() {
        return Ok(vec![0; width]);
    }
    let v = p.rational_valuation(x).expect("nonzero");
    if v < lo {
        return Err(Error::DigitsBelowWindow { valuation: v, lo });
    }
    let r = p.reduce(x, hi + 1) * p.pow_rational(-lo);
    debug_assert!(r.is_integer());
    let mut y = r.to_integer();
    let pb = p.big();
    let mut out = Vec::with_capacity(width);
    for _ in 0..width {
        let d = Prime::symmetric_mod(&y, &pb);
        y = (&y - &d) / &pb;
        out.push(i64::try_from(d).expect("digit fits"));
    }
    debug_assert!(y.is_zero());
    Ok(out)
}

/// Browkin's s-function: the sum of the balanced digits at indices `≤ 0`.
pub fn s_function(alpha: &PAdicScalar) -> Result<YElem> {
    let p = alpha.prime();
    if let Repr::Truncated { precision, .. } = alpha.repr() {
        if *precision <= 0 {
            return Err(Error::InsufficientPrecision(format!(
                "s needs precision at least 1, have {precision}"
            )));
        }
    }
    YElem::from_rational(p, &p.reduce(alpha.approx(), 1))
}

/// Whether `|x - y|_p < 1`, equivalently `s(x) = s(y)`.
pub fn s_equivalence(x: &PAdicScalar, y: &PAdicScalar) -> Result<bool> {
    for z in [x, y] {
        if z.precision().is_some_and(|n| n < 1) {
            return Err(Error::InsufficientPrecision(
                "s-equivalence needs precision at least 1".into(),
            ));
        }
    }
    let d = x.sub(y)?;
    d.valuation()
        .at_least(1)
        .ok_or_else(|| Error::InsufficientPrecision("difference undetermined".into()))
}

/// Reassembles `Σ x_j p^j` from a digit window starting at `lo`.
pub fn from_digits(digits: &[i64], p: Prime, lo: i64) -> BigRational {
    let mut acc = BigInt::zero();
    for d in digits.iter().rev() {
        acc = acc * p.big() + BigInt::from(*d);
    }
    BigRational::from_integer(acc) * p.pow_rational(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn digit_examples() {
        let p = Prime::new(5).unwrap();
        assert_eq!(balanced_digits(&q(7, 1), p, 0, 1).unwrap(), vec![2, 1]);
        assert_eq!(balanced_digits(&q(0, 1), p, 0, 3).unwrap(), vec![0; 4]);
        assert_eq!(balanced_digits(&q(-1, 1), p, 0, 1).unwrap(), vec![-1, 0]);
        assert_eq!(balanced_digits(&q(7, 5), p, -1, 0).unwrap(), vec![2, 1]);
        assert_eq!(
            balanced_digits(&q(7, 5), p, 0, 2),
            Err(Error::DigitsBelowWindow { valuation: -1, lo: 0 })
        );
        assert_eq!(
            balanced_digits(&q(1, 1), p, 2, 1),
            Err(Error::EmptyWindow { lo: 2, hi: 1 })
        );
        // 1/3 = 2 + 5 * (-1/3 * ...) ; digits stay in range
        let d = balanced_digits(&q(1, 3), p, 0, 10).unwrap();
        assert!(d.iter().all(|x| x.abs() <= 2));
    }

    #[test]
    fn s_examples() {
        let p = Prime::new(5).unwrap();
        let s = |x: BigRational| s_function(&PAdicScalar::exact(p, x)).unwrap().value(p);
        assert_eq!(s(q(7, 5)), q(7, 5));
        assert_eq!(s(q(132, 5)), q(7, 5));
        assert_eq!(s(q(10, 1)), q(0, 1));
        let t = PAdicScalar::truncated(p, &q(3, 1), 0);
        assert!(matches!(s_function(&t), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn s_equivalence_examples() {
        let p = Prime::new(5).unwrap();
        let e = |a, b| {
            s_equivalence(&PAdicScalar::exact(p, a), &PAdicScalar::exact(p, b)).unwrap()
        };
        assert!(e(q(7, 1), q(32, 1)));
        assert!(e(q(3, 7), q(3, 7)));
        assert!(!e(q(7, 5), q(2, 5)));
    }

    proptest! {
        #[test]
        fn digits_reconstruct(n in -100000i64..100000, d in 1i64..5000, e in 0u32..4, hi in 0i64..64) {
            let p = Prime::new(5).unwrap();
            let x = q(n, d) / BigRational::from_integer(p.pow(e as u64));
            prop_assume!(!(d % 5 == 0));
            let lo = p.rational_valuation(&x).unwrap_or(0).min(0);
            let digits = balanced_digits(&x, p, lo, hi).unwrap();
            prop_assert!(digits.iter().all(|x| x.abs() <= 2));
            let back = from_digits(&digits, p, lo);
            let diff = PAdicScalar::exact(p, &x - back);
            prop_assert_eq!(diff.valuation().at_least(hi + 1), Some(true));
        }

        #[test]
        fn s_lands_in_alphabet(n in -100000i64..100000, d in 1i64..5000, e in 0u32..4) {
            let p = Prime::new(7).unwrap();
            let x = q(n, d) / BigRational::from_integer(p.pow(e as u64));
            let a = PAdicScalar::exact(p, x.clone());
            let s = s_function(&a).unwrap();
            prop_assert!(s.is_valid(p));
            let r = PAdicScalar::exact(p, x - s.value(p));
            prop_assert_eq!(r.valuation().at_least(1), Some(true));
        }
    }
}
