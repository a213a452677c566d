//! The integer form of the algorithm on rational inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::naive::naive_s;
use crate::padic::Prime;

/// Hard stop for the reference loop; rational inputs end far sooner.
pub const ITERATION_CAP: usize = 10_000;

/// `(x_n, y_n, z_n)` with `α_n = x_n / z_n`, `β_n = y_n / z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalJPState {
    pub x: BigRational,
    pub y: BigRational,
    pub z: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalJPRun {
    pub states: Vec<RationalJPState>,
    pub digits: Vec<(BigRational, BigRational)>,
    /// Number of digit pairs emitted before `z_{n+1} = 0`.
    pub steps: usize,
    pub terminated: bool,
    /// `z_n / p^n ∈ Z`, `ν(y_{n+1}) > ν(z_n)` and `ν(z_{n+1}) > ν(z_n)` at every step.
    pub invariants_hold: bool,
}

fn nu(p: &BigInt, q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let count = |mut x: BigInt| {
        let mut v = 0i64;
        while (&x % p).is_zero() {
            x /= p;
            v += 1;
        }
        v
    };
    Some(count(q.numer().clone()) - count(q.denom().clone()))
}

/// Runs `y_{n+1} = x_n − a_n z_n`, `z_{n+1} = y_n − b_n z_n`,
/// `x_{n+1} = z_n` from `(x_0, y_0, z_0)` until `z_{n+1} = 0`.
pub fn rational_jp(x0: &BigRational, y0: &BigRational, z0: &BigInt, p: Prime) -> RationalJPRun {
    let pb = BigInt::from(p.get());
    let mut st = RationalJPState {
        x: x0.clone(),
        y: y0.clone(),
        z: BigRational::from_integer(z0.clone()),
    };
    let mut states = vec![st.clone()];
    let mut digits = Vec::new();
    let mut ok = !z0.is_zero();
    let mut scale = BigRational::from_integer(BigInt::from(1));
    let pr = BigRational::from_integer(pb.clone());
    for _ in 0..ITERATION_CAP {
        if !(&st.z / &scale).is_integer() {
            ok = false;
        }
        let a = naive_s(&(&st.x / &st.z), p);
        let b = naive_s(&(&st.y / &st.z), p);
        let y1 = &st.x - &a * &st.z;
        let z1 = &st.y - &b * &st.z;
        digits.push((a, b));
        let vz = nu(&pb, &st.z);
        if let (Some(v1), Some(v0)) = (nu(&pb, &y1), vz) {
            ok &= v1 > v0;
        }
        if z1.is_zero() {
            return RationalJPRun {
                steps: digits.len(),
                states,
                digits,
                terminated: true,
                invariants_hold: ok,
            };
        }
        if let (Some(v1), Some(v0)) = (nu(&pb, &z1), vz) {
            ok &= v1 > v0;
        }
        st = RationalJPState {
            x: st.z.clone(),
            y: y1,
            z: z1,
        };
        states.push(st.clone());
        scale *= &pr;
    }
    RationalJPRun {
        steps: digits.len(),
        states,
        digits,
        terminated: false,
        invariants_hold: ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn worked_triple() {
        let p = Prime::new(5).unwrap();
        let r = rational_jp(&q(32, 1), &q(26, 1), &BigInt::from(5), p);
        assert!(r.terminated && r.invariants_hold);
        assert_eq!(r.steps, 2);
        assert_eq!(r.digits, vec![(q(7, 5), q(1, 5)), (q(1, 5), q(1, 1))]);
    }

    #[test]
    fn alphabet_inputs_stop_at_once() {
        let p = Prime::new(7).unwrap();
        let r = rational_jp(&q(3, 7), &q(-2, 1), &BigInt::from(1), p);
        assert_eq!(r.steps, 1);
    }
}
