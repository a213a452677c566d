//! Linear and algebraic relations between the limits and their convergents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::engine::{ExpansionTrace, Status};
use crate::error::{Error, Result};
use crate::padic::{format_rational, PAdicScalar, Prime, Valuation};
use crate::report::{BoundReport, BoundRow, Quantity, Relation};

/// `F(X, Y) = Σ c_{ij} X^i Y^j` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPoly {
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

impl RelationPoly {
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), BigInt)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert_with(BigInt::zero) += c;
        }
        coeffs.retain(|_, c: &mut BigInt| !c.is_zero());
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("relation polynomial is zero".into()));
        }
        let p = RelationPoly { coeffs };
        if p.degree() == 0 {
            return Err(Error::InvalidInput("relation polynomial is constant".into()));
        }
        Ok(p)
    }

    /// Parses `"c:i:j,c:i:j,..."`, e.g. `"1:0:1,-1:2:0"` for `Y − X²`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad relation polynomial {s:?}, expected c:i:j,..."));
        let terms = s
            .split(',')
            .map(|t| {
                let parts: Vec<&str> = t.trim().split(':').collect();
                let [c, i, j] = parts[..] else { return Err(bad()) };
                Ok((
                    (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?),
                    c.parse::<BigInt>().map_err(|_| bad())?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.coeffs
    }

    /// Total degree `D`.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// `K = Σ |c_{ij}|`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, ((i, j), c)| {
            acc + BigRational::from_integer(c.clone()) * num_traits::pow(x.clone(), *i as usize) * num_traits::pow(y.clone(), *j as usize)
        })
    }

    pub fn eval_scalar(&self, x: &PAdicScalar, y: &PAdicScalar) -> Result<PAdicScalar> {
        let p = x.prime();
        let mut acc = PAdicScalar::zero(p);
        for ((i, j), c) in &self.coeffs {
            let t = x.pow(*i)?.mul(&y.pow(*j)?)?;
            acc = acc.add(&PAdicScalar::exact(p, BigRational::from_integer(c.clone())).mul(&t)?)?;
        }
        Ok(acc)
    }

    /// Coefficients `A_{ij}` of `F` expanded around `(α, β)`.
    pub fn taylor(&self, alpha: &PAdicScalar, beta: &PAdicScalar) -> Result<BTreeMap<(u32, u32), PAdicScalar>> {
        let p = alpha.prime();
        let mut out: BTreeMap<(u32, u32), PAdicScalar> = BTreeMap::new();
        for ((a, b), c) in &self.coeffs {
            for i in 0..=*a {
                for j in 0..=*b {
                    let w = c * binomial(*a, i) * binomial(*b, j);
                    let t = PAdicScalar::exact(p, BigRational::from_integer(w))
                        .mul(&alpha.pow(a - i)?)?
                        .mul(&beta.pow(b - j)?)?;
                    let slot = out.entry((i, j)).or_insert_with(|| PAdicScalar::zero(p));
                    *slot = slot.add(&t)?;
                }
            }
        }
        Ok(out)
    }

    /// `(A_10, A_01)`.
    pub fn taylor_linear(&self, alpha: &PAdicScalar, beta: &PAdicScalar) -> Result<(PAdicScalar, PAdicScalar)> {
        let t = self.taylor(alpha, beta)?;
        let p = alpha.prime();
        let get = |k| t.get(&k).cloned().unwrap_or_else(|| PAdicScalar::zero(p));
        Ok((get((1, 0)), get((0, 1))))
    }
}

impl std::fmt::Display for RelationPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|((i, j), c)| format!("{c}:{i}:{j}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// `|x|_p = p^{−ν}` for a certified finite valuation.
fn p_abs(p: Prime, v: i64) -> BigRational {
    p.pow_rational(-v)
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `U_n M_n` with `U_n = max |Q_n − limit|_p` and `M_n` the height of
/// `p^{K_n+δ}(A_n, B_n, C_n)`. `None` when `U_n` is not certified.
pub fn um_product(trace: &ExpansionTrace, n: i64, degree: u32) -> Result<Option<BigRational>> {
    let p = trace.prime();
    let Some(m) = trace.min_residual(n)? else { return Ok(None) };
    let e = match m {
        Valuation::Finite(v) => v + trace.expansion.big_k(n),
        Valuation::Infinite => return Ok(Some(BigRational::zero())),
        Valuation::AtLeast(_) => return Ok(None),
    };
    let t = trace.normalized_triple(n)?;
    let mh = t.iter().map(|x| x.abs()).max().expect("three entries");
    let md = num_traits::pow(mh, degree as usize);
    // U M^D = M^D / p^e, reduced by hand to avoid a gcd of huge integers
    if e <= 0 {
        return Ok(Some(BigRational::from_integer(md * p.pow((-e) as u64))));
    }
    let v = (p.int_valuation(&md).unwrap_or(0) as i64).min(e);
    let num = md / p.pow(v as u64);
    Ok(Some(BigRational::new_raw(num, p.pow((e - v) as u64))))
}

/// Tracks `S_n = A A_{n−1} + B B_{n−1} + C C_{n−1}` for a declared relation
/// `Aα + Bβ + C = 0`.
///
/// Asserts `S_n = −(A V^α_{n−1} + B V^β_{n−1})` (exactly for exact limits,
/// modulo the working precision otherwise). The unsigned form
/// `S_n = A V^α_{n−1} + B V^β_{n−1}` is tallied in `literal_sign_rows`.
pub fn linear_dependence_monitor(
    trace: &ExpansionTrace,
    relation: (&BigRational, &BigRational, &BigRational),
    n_max: usize,
) -> Result<BoundReport> {
    let p = trace.prime();
    let conv = &trace.convergents;
    let (ca, cb, cc) = relation;
    let alpha = trace.alpha.to_scalar(p);
    let beta = trace.beta.to_scalar(p);
    let declared = PAdicScalar::exact(p, ca.clone())
        .mul(&alpha)?
        .add(&PAdicScalar::exact(p, cb.clone()).mul(&beta)?)?
        .add(&PAdicScalar::exact(p, cc.clone()))?;
    let top = (n_max as i64).min(trace.len() as i64);
    let mut report = BoundReport::new("dependence")
        .param("p", p)
        .param("relation", format!("{},{},{}", format_rational(ca), format_rational(cb), format_rational(cc)))
        .param("relation_holds", declared.vanishes())
        .param("terminated", matches!(trace.status(), Status::Finite(_)));
    let mut literal = 0usize;
    let mut vanishes_from: Option<i64> = None;
    let mut um = Vec::new();
    for n in 0..=top {
        let (xa, xb, xc) = conv.triple(n - 1)?;
        let s = ca * &xa + cb * &xb + cc * &xc;
        let (va, vb) = trace.residuals(n - 1)?;
        let lin = PAdicScalar::exact(p, ca.clone())
            .mul(&va)?
            .add(&PAdicScalar::exact(p, cb.clone()).mul(&vb)?)?;
        let se = PAdicScalar::exact(p, s.clone());
        let ok = se.add(&lin)?.vanishes();
        if se.sub(&lin)?.vanishes() {
            literal += 1;
        }
        let row = match lin.precision() {
            None => BoundRow::rational(n, "S", s.clone(), Relation::Eq, -lin.approx().clone()),
            Some(prec) => BoundRow::new(
                n,
                "S",
                Quantity::Rational(s.clone()),
                Relation::Eq,
                Quantity::Rational(-lin.approx().clone()),
                ok,
            )
            .with_note(format!("modulo p^{prec}")),
        };
        report.push(row);
        if s.is_zero() {
            vanishes_from.get_or_insert(n);
        } else {
            vanishes_from = None;
        }
        if n < trace.len() as i64 {
            match um_product(trace, n, 1)? {
                Some(x) => um.push(format!("{:.6e}", to_f64(&x))),
                None => {
                    report.set_param("UM_undecided_from", n);
                }
            }
        }
    }
    report.set_param("literal_sign_rows", literal);
    report.set_param(
        "S_vanishes_from",
        vanishes_from.map_or_else(|| "none".to_string(), |n| n.to_string()),
    );
    report.set_param("UM", um.join(" "));
    Ok(report)
}

/// Checks the two lower bounds forced by a nonzero value
/// `F(t_n/v_n, u_n/v_n)`: `|F|_p ≥ 1/(K M_n^D)` and, where the linear
/// Taylor terms dominate, `U_n ≥ 1/(H K M_n^D)`.
///
/// `t_n/v_n` approximates `α` and `u_n/v_n` approximates `β`. Rows whose
/// higher Taylor terms are not yet dominated are counted in `pre_asymptotic`.
pub fn relation_propagation_check(
    f: &RelationPoly,
    approx: &[[BigInt; 3]],
    alpha: &PAdicScalar,
    beta: &PAdicScalar,
    n_max: usize,
) -> Result<BoundReport> {
    let p = alpha.prime();
    let d = f.degree();
    let k = BigRational::from_integer(f.coefficient_sum());
    let taylor = f.taylor(alpha, beta)?;
    let zero = PAdicScalar::zero(p);
    let a10 = taylor.get(&(1, 0)).unwrap_or(&zero);
    let a01 = taylor.get(&(0, 1)).unwrap_or(&zero);
    let lin_val = |x: &PAdicScalar| -> Result<Option<i64>> {
        match x.valuation() {
            Valuation::Finite(v) => Ok(Some(v)),
            Valuation::Infinite => Ok(None),
            Valuation::AtLeast(_) if x.is_exact() => Ok(None),
            Valuation::AtLeast(_) => Err(Error::InsufficientPrecision(
                "linear Taylor coefficient is zero modulo the working precision".into(),
            )),
        }
    };
    let (v10, v01) = (lin_val(a10)?, lin_val(a01)?);
    let v_h = match (v10, v01) {
        (None, None) => {
            return Err(Error::InvalidInput(
                "both linear Taylor coefficients vanish".into(),
            ))
        }
        (a, b) => a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX)),
    };
    let h = p_abs(p, v_h);
    let mut report = BoundReport::new("propagation")
        .param("p", p)
        .param("F", f)
        .param("D", d)
        .param("K", &k)
        .param("H", format_rational(&h));
    let mut zero_rows = 0usize;
    let mut pre_asymptotic = 0usize;
    let top = (n_max + 1).min(approx.len());
    for (n, [t, u, v]) in approx[..top].iter().enumerate() {
        let n = n as i64;
        if v.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let vr = BigRational::from_integer(v.clone());
        let x = BigRational::from_integer(t.clone()) / &vr;
        let y = BigRational::from_integer(u.clone()) / &vr;
        let fv = f.eval(&x, &y);
        if fv.is_zero() {
            zero_rows += 1;
            report.push(BoundRow::rational(n, "F_zero", fv, Relation::Eq, BigRational::zero()));
            continue;
        }
        let m = t.abs().max(u.abs()).max(v.abs());
        let md = BigRational::from_integer(num_traits::pow(m, d as usize));
        let floor = (&k * &md).recip();
        let f_abs = p_abs(p, p.rational_valuation(&fv).expect("nonzero"));
        report.push(BoundRow::rational(n, "F", f_abs, Relation::Ge, floor.clone()));

        // U_n and the Taylor terms, as valuations
        let ex = |q: &BigRational| PAdicScalar::exact(p, q.clone());
        let dx = ex(&x).sub(alpha)?.valuation();
        let dy = ex(&y).sub(beta)?.valuation();
        let (Some(dxv), Some(dyv)) = (dx.lower_bound(), dy.lower_bound()) else {
            pre_asymptotic += 1;
            continue;
        };
        let Some(Valuation::Finite(u_val)) = dx.min(dy) else {
            report.set_param("U_undecided_from", n);
            break;
        };
        // |A_ij dx^i dy^j| ≤ H U for every term of degree ≥ 2 gives |F| ≤ H U
        let dominated = taylor
            .iter()
            .filter(|((i, j), a)| i + j > 1 && !a.is_exact_zero())
            .all(|((i, j), a)| {
                a.valuation()
                    .lower_bound()
                    .is_some_and(|va| va + *i as i64 * dxv + *j as i64 * dyv >= v_h + u_val)
            });
        if !dominated {
            pre_asymptotic += 1;
            continue;
        }
        let u_n = p_abs(p, u_val);
        report.push(BoundRow::rational(n, "U", u_n, Relation::Ge, floor / &h));
    }
    report.set_param("zero_rows", zero_rows);
    report.set_param("pre_asymptotic", pre_asymptotic);
    Ok(report)
}

/// `(t_n, u_n, v_n) = p^{K_n+δ}(A_n, B_n, C_n)` for `0 ≤ n ≤ n_max`.
pub fn convergent_sequence(trace: &ExpansionTrace, n_max: usize) -> Result<Vec<[BigInt; 3]>> {
    let top = (n_max as i64).min(trace.len() as i64 - 1);
    (0..=top).map(|n| trace.normalized_triple(n)).collect()
}

/// Balanced truncations `(x mod p^n, y mod p^n, 1)` for `1 ≤ n ≤ count`.
pub fn truncation_sequence(x: &PAdicScalar, y: &PAdicScalar, count: usize) -> Vec<[BigInt; 3]> {
    let p = x.prime();
    (1..=count as i64)
        .map(|n| {
            [
                p.reduce(x.approx(), n).to_integer(),
                p.reduce(y.approx(), n).to_integer(),
                BigInt::one(),
            ]
        })
        .collect()
}
