//! Exhaustive search for small-height approximations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::analysis::{check_candidate_height, euclidean_height, tilde_x, DEFAULT_KAPPA};
use crate::engine::{expand, Status};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Prime};

/// `t = m / p^e` with `|m| ≤ height_cap`, `0 ≤ e ≤ exponent_cap`, `p ∤ m`
/// when `e > 0`; `v ∈ Z` with `0 < |v| ≤ height_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub height_cap: i64,
    pub exponent_cap: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub t: BigRational,
    pub u: BigRational,
    pub v: BigInt,
}

impl Hit {
    pub fn height(&self) -> BigRational {
        euclidean_height(&[self.t.clone(), self.u.clone(), BigRational::from_integer(self.v.clone())])
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub n: usize,
    pub caps: SearchCaps,
    /// `2K_{n+1}`; hits satisfy `ν(α − t/v), ν(β − u/v) > radius`.
    pub radius: i64,
    pub hits: Vec<Hit>,
    /// Hits with height certainly below `1/(3 x̃^n)`.
    pub violations: Vec<Hit>,
    /// Hits too close to the floor to decide with the enclosure used.
    pub undecided: usize,
}

/// `x mod m` for a p-integral rational, as an integer in `[0, m)`.
fn residue(x: &BigRational, m: &BigInt) -> BigInt {
    let inv = x
        .denom()
        .extended_gcd(m)
        .x
        .mod_floor(m);
    (x.numer() * inv).mod_floor(m)
}

/// All `m / p^e` within the caps congruent to `target` modulo
/// `p^{need}` after clearing `p^e`; `target` must be p-integral once
/// multiplied by `p^e`.
fn coordinate_candidates(target: &BigRational, p: Prime, need: i64, caps: SearchCaps) -> Vec<BigRational> {
    let mut out = Vec::new();
    let cap = caps.height_cap;
    for e in 0..=caps.exponent_cap {
        let pe = p.pow(e as u64);
        let shifted = target * BigRational::from_integer(pe.clone());
        // m ≡ p^e target (mod p^{need + e}) requires p^e target to be p-integral
        if p.split(&shifted).is_some_and(|(v, _)| v < 0) {
            continue;
        }
        let modulus = p.pow((need + e as i64).max(0) as u64);
        let r = if shifted.is_zero() { BigInt::zero() } else { residue(&shifted, &modulus) };
        let small = modulus.to_i128().filter(|m| *m < (1i128 << 62));
        let pi = p.get() as i64;
        for m in -cap..=cap {
            if e > 0 && m % pi == 0 {
                continue;
            }
            let hit = match (small, r.to_i128()) {
                (Some(md), Some(ri)) => (m as i128 - ri).rem_euclid(md) == 0,
                _ => (BigInt::from(m) - &r).mod_floor(&modulus).is_zero(),
            };
            if hit {
                out.push(BigRational::new(BigInt::from(m), pe.clone()));
            }
        }
    }
    out
}

/// Every `(t, u, v)` within `caps` with
/// `max(|α − t/v|_p, |β − u/v|_p) < p^{−2K_{n+1}}`, sorted by height and
/// then lexicographically, together with the height-floor verdicts.
///
/// Needs an expansion of `(α, β)` with at least `n + 2` digit pairs.
pub fn small_height_search(
    alpha: &BigRational,
    beta: &BigRational,
    p: Prime,
    n: usize,
    caps: SearchCaps,
) -> Result<SearchResult> {
    let a = PAdicScalar::exact(p, alpha.clone());
    let b = PAdicScalar::exact(p, beta.clone());
    let e = expand(&a, &b, n + 2)?;
    if e.len() < n + 2 {
        return Err(Error::IndexOutOfRange {
            index: n as i64 + 1,
            available: e.len(),
        });
    }
    debug_assert!(e.len() == n + 2 || e.status() != Status::Finite(n + 1));
    let radius = 2 * e.big_k(n as i64 + 1);
    let tx = tilde_x(p, DEFAULT_KAPPA);
    let vs: Vec<i64> = (-caps.height_cap..=caps.height_cap).filter(|v| *v != 0).collect();
    let mut hits: Vec<Hit> = vs
        .par_iter()
        .flat_map_iter(|&v| {
            let vb = BigInt::from(v);
            let vr = BigRational::from_integer(vb.clone());
            let nv = p.int_valuation(&vb).expect("nonzero") as i64;
            // ν(α − t/v) > R  iff  t ≡ vα (mod p^{R + 1 + ν(v)})
            let need = radius + 1 + nv;
            let ts = coordinate_candidates(&(alpha * &vr), p, need, caps);
            let us = if ts.is_empty() {
                Vec::new()
            } else {
                coordinate_candidates(&(beta * &vr), p, need, caps)
            };
            let mut local = Vec::with_capacity(ts.len() * us.len());
            for t in &ts {
                for u in &us {
                    local.push(Hit {
                        t: t.clone(),
                        u: u.clone(),
                        v: vb.clone(),
                    });
                }
            }
            local
        })
        .collect();
    hits.sort_by(|x, y| {
        x.height()
            .cmp(&y.height())
            .then_with(|| x.t.cmp(&y.t))
            .then_with(|| x.u.cmp(&y.u))
            .then_with(|| x.v.cmp(&y.v))
    });
    let mut violations = Vec::new();
    let mut undecided = 0;
    let one = BigRational::one();
    for h in &hits {
        match check_candidate_height(&h.t, &h.u, &BigRational::from_integer(h.v.clone()), n as i64, &tx) {
            Some(true) => {}
            Some(false) => violations.push(h.clone()),
            None => undecided += 1,
        }
        debug_assert!(h.height() >= one.clone() / BigRational::from_integer(p.pow(caps.exponent_cap as u64)));
    }
    Ok(SearchResult {
        n,
        caps,
        radius,
        hits,
        violations,
        undecided,
    })
}

/// Direct membership test of one candidate, for cross-checking the search.
pub fn in_ball(alpha: &BigRational, beta: &BigRational, p: Prime, radius: i64, t: &BigRational, u: &BigRational, v: &BigInt) -> bool {
    let vr = BigRational::from_integer(v.clone());
    let ok = |x: &BigRational, c: &BigRational| p.rational_valuation(&(x - c / &vr)).is_none_or(|d| d > radius);
    ok(alpha, t) && ok(beta, u)
}

/// Whether `m / p^e` is within the caps in reduced form.
pub fn within_caps(x: &BigRational, p: Prime, caps: SearchCaps) -> bool {
    let den_ok = p.int_valuation(x.denom()).is_some_and(|e| e <= caps.exponent_cap as u64)
        && x.denom() == &p.pow(p.int_valuation(x.denom()).unwrap_or(0));
    den_ok && x.numer().abs() <= BigInt::from(caps.height_cap)
}
