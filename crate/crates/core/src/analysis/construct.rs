//! Random expansions whose exponents `k_n`, `h_n` follow a growth plan.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Expansion, Status};
use crate::error::{Error, Result};
use crate::padic::{Prime, YElem};

/// Lower bounds imposed on `k_{n+1}` and `h_{n+1}` for `n ≥ 0`
/// (`k_0 = k_{−1} = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthPlan {
    /// `k_{n+1} ≥ ℓ_n + ℓ_{n−1}`, `h_{n+1} ≥ ℓ_n`, with `ℓ_{−1} = 0`. The
    /// list is extended by repeating its last entry.
    Ell(Vec<i64>),
    /// `ℓ_n = base + slope · n`.
    EllLinear { base: i64, slope: i64 },
    /// `k_{n+1} ≥ (D−1)(k_n + k_{n−1}) + 2D`, `h_{n+1} ≥ (D−1)k_n + D`.
    Degree(i64),
    /// `k_{n+1} = k_mult (k_n + k_{n−1}) + k_add`, `h_{n+1} ≥ h_mult k_n + h_add`.
    Affine {
        k_mult: i64,
        k_add: i64,
        h_mult: i64,
        h_add: i64,
    },
    /// `k_n = 1` for all `n ≥ 1`.
    Tight,
    /// `k_n` uniform in `1..=max_k`, no condition on `h_n`.
    Generic { max_k: i64 },
}

impl GrowthPlan {
    pub fn validate(&self) -> Result<()> {
        match self {
            GrowthPlan::Ell(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidPlan("empty ℓ sequence".into()));
                }
                if let Some(i) = v.iter().position(|&l| l < 1) {
                    return Err(Error::InvalidPlan(format!(
                        "ℓ positivity: ℓ_{i} = {} but every ℓ_n must be ≥ 1",
                        v[i]
                    )));
                }
            }
            GrowthPlan::EllLinear { base, slope } => {
                if *base < 1 || *slope < 0 {
                    return Err(Error::InvalidPlan(
                        "ℓ positivity: need base ≥ 1 and slope ≥ 0".into(),
                    ));
                }
            }
            GrowthPlan::Degree(d) => {
                if *d < 1 {
                    return Err(Error::InvalidPlan(format!("degree must be ≥ 1, got {d}")));
                }
            }
            GrowthPlan::Affine {
                k_mult,
                k_add,
                h_mult,
                h_add,
            } => {
                if *k_mult < 0 || *h_mult < 0 || *k_add < 1 {
                    return Err(Error::InvalidPlan(
                        "affine plan needs k_mult, h_mult ≥ 0 and k_add ≥ 1".into(),
                    ));
                }
                let _ = h_add;
            }
            GrowthPlan::Tight => {}
            GrowthPlan::Generic { max_k } => {
                if *max_k < 1 {
                    return Err(Error::InvalidPlan("max_k must be ≥ 1".into()));
                }
            }
        }
        Ok(())
    }

    /// `ℓ_n` for plans defined by an ℓ sequence; `0` for `n < 0`.
    pub fn ell(&self, n: i64) -> Option<i64> {
        if n < 0 {
            return Some(0);
        }
        match self {
            GrowthPlan::Ell(v) => Some(*v.get(n as usize).unwrap_or_else(|| v.last().expect("nonempty"))),
            GrowthPlan::EllLinear { base, slope } => Some(base + slope * n),
            _ => None,
        }
    }

    /// `f(n) = ℓ_0 + ... + ℓ_n`.
    pub fn f(&self, n: i64) -> Option<i64> {
        (0..=n).map(|j| self.ell(j)).sum()
    }

    /// `(min k_{n+1}, min h_{n+1}, fixed)`; `fixed` means `k_{n+1}` is
    /// prescribed rather than bounded below.
    fn requirement<R: Rng>(&self, n: i64, k_n: i64, k_n1: i64, rng: &mut R) -> (i64, Option<i64>, bool) {
        match self {
            GrowthPlan::Ell(_) | GrowthPlan::EllLinear { .. } => {
                let l0 = self.ell(n).expect("ℓ plan");
                let l1 = self.ell(n - 1).expect("ℓ plan");
                (l0 + l1, Some(l0), false)
            }
            GrowthPlan::Degree(d) => ((d - 1) * (k_n + k_n1) + 2 * d, Some((d - 1) * k_n + d), false),
            GrowthPlan::Affine {
                k_mult,
                k_add,
                h_mult,
                h_add,
            } => (k_mult * (k_n + k_n1) + k_add, Some(h_mult * k_n + h_add), true),
            GrowthPlan::Tight => (1, None, true),
            GrowthPlan::Generic { max_k } => (rng.gen_range(1..=*max_k), None, true),
        }
    }
}

/// A uniformly random integer with balanced digits `d_0, ..., d_{len−1}`,
/// `d_0 ≠ 0`.
fn random_balanced<R: Rng>(p: Prime, len: usize, rng: &mut R) -> BigInt {
    let h = p.half();
    let mut d0 = 0;
    while d0 == 0 {
        d0 = rng.gen_range(-h..=h);
    }
    if len <= 1 {
        return BigInt::from(d0);
    }
    // pack several digits into one machine word per Horner step
    let pg = p.get() as i128;
    let mut chunk = 1usize;
    let mut pc: i128 = pg;
    while pc * pg < (1i128 << 62) {
        pc *= pg;
        chunk += 1;
    }
    let mut acc = BigInt::from(0);
    let mut remaining = len - 1;
    while remaining > 0 {
        let c = chunk.min(remaining);
        let mut word: i128 = 0;
        let mut scale: i128 = 1;
        for _ in 0..c {
            word = word * pg + rng.gen_range(-h..=h) as i128;
            scale *= pg;
        }
        acc = acc * BigInt::from(scale) + BigInt::from(word);
        remaining -= c;
    }
    acc * p.big() + BigInt::from(d0)
}

/// A random element of `Y` with exponent exactly `e` (`e = 0`: nonzero integer digit).
fn random_y<R: Rng>(p: Prime, e: u32, rng: &mut R) -> YElem {
    YElem::new(p, random_balanced(p, e as usize + 1, rng), e).expect("balanced digits stay in Y")
}

#[derive(Debug, Clone, Copy)]
pub struct ConstructOptions {
    /// Extra exponent added to bounded (not prescribed) `k_n`, drawn from `0..=slack`.
    pub slack: i64,
    /// Probability weight of `b_n = 0` where allowed, as `1 / zero_odds`.
    pub zero_odds: u32,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            slack: 1,
            zero_odds: 4,
        }
    }
}

/// Draws `len` digit pairs satisfying `plan`. The expansion is marked
/// `DepthLimited`: it is the prefix of the infinite expansions sharing it.
pub fn construct_fast(plan: &GrowthPlan, p: Prime, len: usize, seed: u64) -> Result<Expansion> {
    construct_with(plan, p, len, seed, ConstructOptions::default())
}

pub fn construct_with(plan: &GrowthPlan, p: Prime, len: usize, seed: u64, opts: ConstructOptions) -> Result<Expansion> {
    plan.validate()?;
    if len == 0 {
        return Err(Error::InvalidPlan("length must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p.get() << 32));
    let mut a = Vec::with_capacity(len);
    let mut b = Vec::with_capacity(len);
    let e0 = rng.gen_range(0..=2);
    a.push(random_y(p, e0, &mut rng));
    b.push(if rng.gen_ratio(1, opts.zero_odds.max(1)) {
        YElem::zero()
    } else {
        random_y(p, rng.gen_range(0..=2), &mut rng)
    });
    let (mut k_n, mut k_n1) = (0i64, 0i64);
    for n in 0..len as i64 - 1 {
        let (kmin, hmin, fixed) = plan.requirement(n, k_n, k_n1, &mut rng);
        let k = if fixed || opts.slack == 0 {
            kmin
        } else {
            kmin + rng.gen_range(0..=opts.slack)
        };
        if k < 1 {
            return Err(Error::InvalidPlan(format!("plan asks for k_{} = {k} < 1", n + 1)));
        }
        let k32 = u32::try_from(k).map_err(|_| Error::InvalidPlan("exponent too large".into()))?;
        a.push(random_y(p, k32, &mut rng));
        // exponent of b_{n+1} must stay below k and satisfy h ≥ hmin
        let e_max = (k - 1).min(hmin.map_or(i64::MAX, |h| k - h));
        let bz = e_max < 0 || rng.gen_ratio(1, opts.zero_odds.max(1));
        b.push(if bz {
            YElem::zero()
        } else {
            random_y(p, rng.gen_range(0..=e_max) as u32, &mut rng)
        });
        k_n1 = k_n;
        k_n = k;
    }
    Expansion::from_digits(p, a, b, Status::DepthLimited)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_respected() {
        let p = Prime::new(5).unwrap();
        for seed in 0..20 {
            let e = construct_fast(&GrowthPlan::Ell(vec![1]), p, 15, seed).unwrap();
            assert!(e.k(1) >= 1);
            for n in 1..14i64 {
                assert!(e.k(n + 1) >= 2);
                assert!(e.h((n + 1) as usize).is_none_or(|h| h >= 1));
            }
            let e = construct_fast(&GrowthPlan::Degree(2), p, 8, seed).unwrap();
            for n in 0..7i64 {
                assert!(e.k(n + 1) >= (e.k(n) + e.k(n - 1)) + 4);
                assert!(e.h((n + 1) as usize).is_none_or(|h| h >= e.k(n) + 2));
            }
            let e = construct_fast(&GrowthPlan::Tight, p, 10, seed).unwrap();
            assert!((1..10).all(|n| e.k(n) == 1));
        }
    }

    #[test]
    fn invalid_plans() {
        let p = Prime::new(5).unwrap();
        assert!(matches!(
            construct_fast(&GrowthPlan::Ell(vec![1, 0, 1]), p, 5, 0),
            Err(Error::InvalidPlan(_))
        ));
        assert!(construct_fast(&GrowthPlan::Degree(0), p, 5, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let p = Prime::new(7).unwrap();
        let g = GrowthPlan::Generic { max_k: 3 };
        assert_eq!(construct_fast(&g, p, 20, 9).unwrap(), construct_fast(&g, p, 20, 9).unwrap());
    }
}
