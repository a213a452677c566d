//! Algebraic identities satisfied by every expansion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Coord, ExpansionTrace};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Valuation};
use crate::report::{BoundReport, BoundRow, Quantity, Relation};

type Mat3 = [[BigRational; 3]; 3];

fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
    })
}

fn det3(m: [[&BigInt; 3]; 3]) -> BigInt {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Checks, for `n ≤ n_max`:
///
/// * `matrix`: the product of step matrices equals the stacked convergents
/// * `det`: that matrix has determinant 1
/// * `nu_C`: `ν(C_n) = −K_n` (n ≥ 1)
/// * `tilde`: recurrence and closed form of `Ã_n`, `B̃_n` agree (n ≥ −1)
/// * `ii`: the cross difference of approximants equals `1/(C_n C_{n−1} C_{n−2})` (n ≥ 2)
/// * `diff`: `V^α_{n−1}V^β_{n−2} − V^β_{n−1}V^α_{n−2} = 1/(α_n C_{n−1} + β_n C_{n−2} + C_{n−3})` (n ≥ 1)
/// * `diff_Q`: the same identity in approximant form (n ≥ 2, exact limits)
/// * `step`: `α_{n+1} V_n = −β_{n+1} V_{n−1} − V_{n−2}` (n ≥ 0)
///
/// The last three need retained complete quotients. For truncated limits
/// the `diff` rows compare valuations; rows that cannot be decided at the
/// available precision are omitted and the first such index is recorded.
pub fn identity_checks(trace: &ExpansionTrace, n_max: usize) -> Result<BoundReport> {
    let e = &trace.expansion;
    let conv = &trace.convergents;
    let p = trace.prime();
    let top = (n_max as i64).min(e.len() as i64 - 1);
    let mut report = BoundReport::new("identities")
        .param("p", p)
        .param("n_max", top);

    // matrix product
    let id: Mat3 = std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { BigRational::one() } else { BigRational::zero() })
    });
    let mut prod = id;
    for n in 0..=top {
        let (a, b) = (e.a()[n as usize].value(p), e.b()[n as usize].value(p));
        let one = BigRational::one();
        let z = BigRational::zero();
        let step: Mat3 = [[a, one.clone(), z.clone()], [b, z.clone(), one.clone()], [one, z.clone(), z]];
        prod = mat_mul(&prod, &step);
        let mut ok = true;
        for (col, m) in [n, n - 1, n - 2].into_iter().enumerate() {
            let (x, y, w) = conv.triple(m)?;
            ok &= prod[0][col] == x && prod[1][col] == y && prod[2][col] == w;
        }
        report.push(BoundRow::boolean(n, "matrix", ok));
    }

    // determinant, in scaled integers
    for n in 0..=top {
        let t = |c, m| conv.scaled(c, m);
        let m = [
            [t(Coord::A, n)?, t(Coord::A, n - 1)?, t(Coord::A, n - 2)?],
            [t(Coord::B, n)?, t(Coord::B, n - 1)?, t(Coord::B, n - 2)?],
            [t(Coord::C, n)?, t(Coord::C, n - 1)?, t(Coord::C, n - 2)?],
        ];
        let s = conv.scale(n)? + conv.scale(n - 1)? + conv.scale(n - 2)?;
        let det = BigRational::new(det3(m), p.pow(s));
        report.push(BoundRow::rational(n, "det", det, Relation::Eq, BigRational::one()));
    }

    for n in 1..=top {
        let v = conv.valuation(Coord::C, n)?.map_or(Valuation::Infinite, Valuation::Finite);
        if let Some(row) = BoundRow::valuation(n, "nu_C", v, Relation::Eq, -e.big_k(n)) {
            report.push(row);
        }
    }

    for n in -1..=top {
        if let Ok(ok) = trace.tilde.agrees(n) {
            report.push(BoundRow::boolean(n, "tilde", ok));
        }
    }

    // (ii), multiplied through by C_n^2 C_{n-1} C_{n-2} in scaled form
    for n in 2..=top {
        let ta = trace.tilde.scaled_closed(Coord::A, n)?;
        let tb = trace.tilde.scaled_closed(Coord::B, n)?;
        let c0 = conv.scaled(Coord::C, n)?;
        let c1 = conv.scaled(Coord::C, n - 1)?;
        let c2 = conv.scaled(Coord::C, n - 2)?;
        let x = ta * (conv.scaled(Coord::B, n)? * c2 - conv.scaled(Coord::B, n - 2)? * c0)
            - tb * (conv.scaled(Coord::A, n)? * c2 - conv.scaled(Coord::A, n - 2)? * c0);
        let s = conv.scale(n)? + conv.scale(n - 1)? + conv.scale(n - 2)?;
        let den = c0 * c0 * c1 * c2;
        let lhs = BigRational::new(x, den.clone());
        let rhs = BigRational::new(c0 * p.pow(s), den);
        report.push(BoundRow::rational(n, "ii", lhs, Relation::Eq, rhs));
    }

    let Some(qs) = e.quotients() else {
        report.set_param("quotients", "dropped");
        return Ok(report);
    };

    let exact_limits = trace.alpha.precision().is_none() && trace.beta.precision().is_none();
    let alpha = trace.alpha.to_scalar(p);
    let beta = trace.beta.to_scalar(p);
    for n in 1..=(top + 1).min(qs.len() as i64 - 1) {
        let (an, bn) = &qs[n as usize];
        let (v1a, v1b) = trace.residuals(n - 1)?;
        let (v2a, v2b) = trace.residuals(n - 2)?;
        let lhs = v1a.mul(&v2b)?.sub(&v1b.mul(&v2a)?)?;
        let ex = |m| -> Result<PAdicScalar> { Ok(PAdicScalar::exact(p, conv.value(Coord::C, m)?)) };
        let den = an.mul(&ex(n - 1)?)?.add(&bn.mul(&ex(n - 2)?)?)?.add(&ex(n - 3)?)?;
        let rhs = match den.inv() {
            Ok(x) => x,
            Err(Error::InsufficientPrecision(_)) => {
                report.set_param("diff_undecided_from", n);
                break;
            }
            Err(err) => return Err(err),
        };
        if exact_limits {
            report.push(BoundRow::rational(
                n,
                "diff",
                lhs.approx().clone(),
                Relation::Eq,
                rhs.approx().clone(),
            ));
        } else {
            let d = lhs.sub(&rhs)?;
            let vr = rhs.valuation();
            let decided = d.valuation().lower_bound().zip(vr.finite()).filter(|(vd, r)| vd > r);
            match decided {
                Some(_) => {
                    let row = BoundRow::new(
                        n,
                        "diff",
                        Quantity::Valuation(lhs.valuation()),
                        Relation::Eq,
                        Quantity::Valuation(vr),
                        lhs.valuation() == vr && d.vanishes(),
                    )
                    .with_note(format!("agree modulo p^{}", d.precision().unwrap_or_default()));
                    report.push(row);
                }
                None => {
                    report.set_param("diff_undecided_from", n);
                    break;
                }
            }
        }
        if exact_limits && n >= 2 {
            let (qa1, qb1) = conv.approximant(n - 1)?;
            let (qa2, qb2) = conv.approximant(n - 2)?;
            let (x, y) = (alpha.approx(), beta.approx());
            let lhs = (x - &qa1) * (y - &qb2) - (y - &qb1) * (x - &qa2);
            let c1 = conv.value(Coord::C, n - 1)?;
            let c2 = conv.value(Coord::C, n - 2)?;
            let rhs = (c1 * c2 * den.approx()).recip();
            report.push(BoundRow::rational(n, "diff_Q", lhs, Relation::Eq, rhs));
        }
    }

    for n in 0..=top {
        match trace.step_identity(n)? {
            Some(ok) => report.push(BoundRow::boolean(n, "step", ok)),
            None => break,
        }
    }
    Ok(report)
}
