//! Bound suites run against a trace.

use anyhow::{bail, Result};
use clap::ValueEnum;
use mcf_core::analysis::{
    check_rate_theorem, check_upper_bound, convergent_sequence, growth_bound, linear_dependence_monitor,
    relation_propagation_check, step_bound_report, RelationPoly,
};
use mcf_core::engine::identity_checks;
use mcf_core::oracle::{small_height_search, SearchCaps};
use mcf_core::padic::{format_rational, parse_rational, Prime};
use mcf_core::report::{BoundReport, BoundRow, Quantity, Relation};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::trace_io::Run;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Rate,
    Upper,
    Growth,
    Steps,
    Heights,
    Identities,
    Dependence,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Rate,
        Suite::Upper,
        Suite::Growth,
        Suite::Steps,
        Suite::Heights,
        Suite::Identities,
        Suite::Dependence,
    ];

    pub fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Self::EACH.to_vec()
        } else {
            vec![self]
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rate => "rate",
            Suite::Upper => "upper",
            Suite::Growth => "growth",
            Suite::Steps => "steps",
            Suite::Heights => "heights",
            Suite::Identities => "identities",
            Suite::Dependence => "dependence",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub n_max: Option<usize>,
    /// `A,B,C` for the relation `Aα + Bβ + C = 0`.
    pub relation: Option<String>,
    /// Polynomial relation `F`, as `c:i:j,...`.
    pub poly: Option<String>,
    pub caps: SearchCaps,
    /// Largest `n` for the height search.
    pub search_n: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n_max: None,
            relation: None,
            poly: None,
            caps: SearchCaps {
                height_cap: 200,
                exponent_cap: 2,
            },
            search_n: 3,
        }
    }
}

/// The exact limits of a trace, if both are exact.
fn exact_pair(run: &Run) -> Option<(BigRational, BigRational)> {
    let t = &run.trace;
    (t.alpha.precision().is_none() && t.beta.precision().is_none())
        .then(|| (t.alpha.to_rational(), t.beta.to_rational()))
}

/// `(x, y, z)` with `α = x/z`, `β = y/z`, `x, y ∈ Z[1/p]` and `z` a
/// positive integer prime to `p`.
pub fn common_triple(p: Prime, alpha: &BigRational, beta: &BigRational) -> (BigRational, BigRational, BigInt) {
    let strip = |d: &BigInt| {
        let v = p.int_valuation(d).unwrap_or(0);
        d / p.pow(v)
    };
    let (da, db) = (strip(alpha.denom()), strip(beta.denom()));
    let z = num_integer::Integer::lcm(&da, &db);
    let zr = BigRational::from_integer(z.clone());
    (alpha * &zr, beta * &zr, z)
}

fn parse_relation(s: &str) -> Result<(BigRational, BigRational, BigRational)> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        bail!("relation must be A,B,C, got {s:?}");
    };
    Ok((parse_rational(a)?, parse_rational(b)?, parse_rational(c)?))
}

/// Runs one suite; `None` when it does not apply to this kind of trace.
pub fn run_suite(suite: Suite, run: &Run, opts: &SuiteOptions) -> Result<Option<BoundReport>> {
    let t = &run.trace;
    let p = t.prime();
    let n_max = opts.n_max.unwrap_or(t.len());
    let report = match suite {
        Suite::Rate => check_rate_theorem(t, n_max)?,
        Suite::Upper => check_upper_bound(t, n_max)?,
        Suite::Growth => growth_bound(t, n_max)?,
        Suite::Identities => identity_checks(t, n_max)?,
        Suite::Steps => {
            let Some((a, b)) = exact_pair(run).filter(|_| run.deep.is_none()) else {
                return Ok(None);
            };
            step_bound_report(p, &[common_triple(p, &a, &b)])?
        }
        Suite::Heights => {
            let Some((a, b)) = exact_pair(run).filter(|_| run.deep.is_none()) else {
                return Ok(None);
            };
            heights_report(p, &a, &b, t.len(), opts)?
        }
        Suite::Dependence => {
            let relation = match &opts.relation {
                Some(s) => parse_relation(s)?,
                None => match exact_pair(run) {
                    Some((a, b)) => default_relation(&a, &b),
                    None => return Ok(None),
                },
            };
            let mut report = linear_dependence_monitor(t, (&relation.0, &relation.1, &relation.2), n_max)?;
            if let Some(f) = &opts.poly {
                let f = RelationPoly::parse(f)?;
                let approx = convergent_sequence(t, n_max)?;
                let alpha = t.alpha.to_scalar(p);
                let beta = t.beta.to_scalar(p);
                report.absorb("F:", relation_propagation_check(&f, &approx, &alpha, &beta, n_max)?);
            }
            report
        }
        Suite::All => bail!("`all` must be expanded before running"),
    };
    Ok(Some(report))
}

/// `den(α) α + den(β) β − (num(α) + num(β)) = 0`.
fn default_relation(a: &BigRational, b: &BigRational) -> (BigRational, BigRational, BigRational) {
    let c = -(BigRational::from_integer(a.numer() + b.numer()));
    (
        BigRational::from_integer(a.denom().clone()),
        BigRational::from_integer(b.denom().clone()),
        c,
    )
}

fn heights_report(p: Prime, a: &BigRational, b: &BigRational, len: usize, opts: &SuiteOptions) -> Result<BoundReport> {
    let caps = opts.caps;
    let mut report = BoundReport::new("heights")
        .param("p", p)
        .param("height_cap", caps.height_cap)
        .param("exponent_cap", caps.exponent_cap);
    // the search at level n needs n + 2 pairs
    let top = opts.search_n.min(len.saturating_sub(2));
    for n in 0..=top {
        if len < n + 2 {
            break;
        }
        let r = small_height_search(a, b, p, n, caps)?;
        report.set_param(&format!("hits_{n}"), r.hits.len());
        if r.undecided > 0 {
            report.set_param(&format!("undecided_{n}"), r.undecided);
        }
        let mut row = BoundRow::new(
            n as i64,
            "violations",
            Quantity::int(r.violations.len() as i64),
            Relation::Eq,
            Quantity::int(0),
            r.violations.is_empty(),
        );
        if let Some(v) = r.violations.first() {
            row = row.with_note(format!(
                "({}, {}, {})",
                format_rational(&v.t),
                format_rational(&v.u),
                v.v
            ));
        }
        report.push(row);
    }
    if len < 2 {
        report.set_param("searched", "none: expansion has a single pair");
    }
    Ok(report)
}

pub fn report_csv(report: &BoundReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "label", "lhs", "relation", "rhs", "satisfied", "tight", "note"])?;
    for r in &report.rows {
        w.write_record([
            r.n.to_string(),
            r.label.clone(),
            r.lhs.to_string(),
            r.relation.to_string(),
            r.rhs.to_string(),
            r.satisfied.to_string(),
            r.tight.to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn report_json(report: &BoundReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}
