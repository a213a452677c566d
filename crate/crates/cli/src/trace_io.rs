//! Trace files: one JSON object per run, rebuilt from its recipe on read.

use anyhow::{bail, Context, Result};
use mcf_core::analysis::{adaptive_deep, construct_fast, validate_degree_plan, GrowthPlan, PROXY_MARGIN};
use mcf_core::engine::{expand, Coord, Expansion, ExpansionTrace, Status};
use mcf_core::padic::{format_rational, parse_scalar, Prime, Valuation};
use serde::{Deserialize, Serialize};

use crate::plan::{format_plan, parse_plan};

/// How to regenerate a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Pair {
        alpha: String,
        beta: String,
        depth: usize,
    },
    /// The first `len` pairs of a `len + margin` construction, traced
    /// against the proxy limit at the last pair.
    Construct {
        plan: String,
        seed: u64,
        len: usize,
        margin: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntOrStr {
    Int(i64),
    Str(String),
}

impl IntOrStr {
    fn valuation(v: Valuation) -> Self {
        match v {
            Valuation::Finite(x) => IntOrStr::Int(x),
            other => IntOrStr::Str(other.to_string()),
        }
    }
}

impl std::fmt::Display for IntOrStr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntOrStr::Int(x) => write!(f, "{x}"),
            IntOrStr::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRow {
    pub n: i64,
    pub a: String,
    pub b: String,
    #[serde(rename = "A")]
    pub big_a: String,
    #[serde(rename = "B")]
    pub big_b: String,
    #[serde(rename = "C")]
    pub big_c: String,
    #[serde(rename = "tildeA")]
    pub tilde_a: String,
    #[serde(rename = "tildeB")]
    pub tilde_b: String,
    pub h: IntOrStr,
    pub k: i64,
    #[serde(rename = "K")]
    pub big_k: i64,
    #[serde(rename = "vVa")]
    pub v_va: IntOrStr,
    #[serde(rename = "vVb")]
    pub v_vb: IntOrStr,
}

impl StepRow {
    pub const HEADER: [&'static str; 13] = [
        "n", "a", "b", "A", "B", "C", "tildeA", "tildeB", "h", "k", "K", "vVa", "vVb",
    ];

    pub fn record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.a.clone(),
            self.b.clone(),
            self.big_a.clone(),
            self.big_b.clone(),
            self.big_c.clone(),
            self.tilde_a.clone(),
            self.tilde_b.clone(),
            self.h.to_string(),
            self.k.to_string(),
            self.big_k.to_string(),
            self.v_va.to_string(),
            self.v_vb.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub p: u64,
    pub input: Recipe,
    pub status: String,
    pub certified_prefix: usize,
    pub steps: Vec<StepRow>,
}

/// A trace together with the recipe that produced it.
pub struct Run {
    pub recipe: Recipe,
    pub trace: ExpansionTrace,
    /// The full construction behind a proxy trace.
    pub deep: Option<Expansion>,
}

pub fn run_pair(p: Prime, alpha: &str, beta: &str, depth: usize) -> Result<Run> {
    let a = parse_scalar(alpha, p)?;
    let b = parse_scalar(beta, p)?;
    let e = expand(&a, &b, depth)?;
    let trace = ExpansionTrace::from_inputs(format!("{alpha} {beta}"), &a, &b, e)?;
    Ok(Run {
        recipe: Recipe::Pair {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
            depth,
        },
        trace,
        deep: None,
    })
}

pub fn run_construct(plan: &GrowthPlan, p: Prime, len: usize, seed: u64, margin: usize) -> Result<Run> {
    let deep = construct_fast(plan, p, len + margin, seed)?;
    let trace = ExpansionTrace::with_proxy(format!("construct {}", format_plan(plan)), &deep, len)?;
    Ok(Run {
        recipe: Recipe::Construct {
            plan: format_plan(plan),
            seed,
            len,
            margin,
        },
        trace,
        deep: Some(deep),
    })
}

/// Construction for degree `d`, extended just far enough for the proxy
/// limit to certify the bounds through `n_max`.
pub fn run_degree(d: i64, plan: &GrowthPlan, p: Prime, n_max: usize, seed: u64) -> Result<Run> {
    validate_degree_plan(d, plan)?;
    let short = construct_fast(plan, p, n_max + 1, seed)?;
    let n = n_max as i64;
    let target = 2 * ((d - 1) * short.big_k(n) + d * n) + 2 * d + 1;
    let deep = adaptive_deep(plan, p, n_max, seed, target)?;
    let margin = deep.len() - n_max - 1;
    run_construct(plan, p, n_max + 1, seed, margin)
}

pub fn default_margin() -> usize {
    PROXY_MARGIN
}

pub fn rebuild(p: Prime, recipe: &Recipe) -> Result<Run> {
    match recipe {
        Recipe::Pair { alpha, beta, depth } => run_pair(p, alpha, beta, *depth),
        Recipe::Construct {
            plan,
            seed,
            len,
            margin,
        } => run_construct(&parse_plan(plan)?, p, *len, *seed, *margin),
    }
}

pub fn trace_file(run: &Run) -> Result<TraceFile> {
    let t = &run.trace;
    let e = &t.expansion;
    let p = t.prime();
    let mut steps = Vec::with_capacity(t.len());
    for n in 0..t.len() as i64 {
        let i = n as usize;
        let (ta, tb) = t.tilde.value(n)?;
        let (va, vb) = t.residual_valuations(n)?;
        steps.push(StepRow {
            n,
            a: format_rational(&e.a()[i].value(p)),
            b: format_rational(&e.b()[i].value(p)),
            big_a: format_rational(&t.convergents.value(Coord::A, n)?),
            big_b: format_rational(&t.convergents.value(Coord::B, n)?),
            big_c: format_rational(&t.convergents.value(Coord::C, n)?),
            tilde_a: format_rational(&ta),
            tilde_b: format_rational(&tb),
            h: e.h(i).map_or_else(|| IntOrStr::Str("inf".into()), IntOrStr::Int),
            k: e.k(n),
            big_k: e.big_k(n),
            v_va: IntOrStr::valuation(va),
            v_vb: IntOrStr::valuation(vb),
        });
    }
    Ok(TraceFile {
        p: p.get(),
        input: run.recipe.clone(),
        status: t.status().to_string(),
        certified_prefix: e.certified_prefix(),
        steps,
    })
}

pub fn to_json(run: &Run) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&trace_file(run)?)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(run: &Run) -> Result<String> {
    let file = trace_file(run)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(StepRow::HEADER)?;
    for row in &file.steps {
        w.write_record(row.record())?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Reads a trace file and regenerates the run, refusing files whose
/// recorded steps differ from what the recipe produces.
pub fn read(text: &str) -> Result<Run> {
    let file: TraceFile = serde_json::from_str(text).context("trace file is not valid trace JSON")?;
    let p = Prime::new(file.p)?;
    let run = rebuild(p, &file.input)?;
    let fresh = trace_file(&run)?;
    if fresh != file {
        let at = fresh
            .steps
            .iter()
            .zip(&file.steps)
            .position(|(x, y)| x != y)
            .map_or_else(|| "length or header".to_string(), |i| format!("step {i}"));
        bail!("trace file does not match its input recipe ({at})");
    }
    Ok(run)
}

pub fn status_exhausted(run: &Run) -> bool {
    run.trace.status() == Status::PrecisionExhausted
}
