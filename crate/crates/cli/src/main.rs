use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcf_core::analysis::{check_fast_construction, check_rate_theorem, check_upper_bound, fast_relation_report, step_bound_report, GrowthPlan};
use mcf_core::error::Error as CoreError;
use mcf_core::oracle::{small_height_search, SearchCaps};
use mcf_core::padic::{format_rational, parse_rational, Prime};
use mcf_core::report::BoundReport;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

mod plan;
mod suites;
mod trace_io;

use suites::{report_csv, report_json, run_suite, Suite, SuiteOptions};

const EXIT_USAGE: u8 = 1;
const EXIT_PRECISION: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "mcf-lab", version, about = "p-adic Jacobi-Perron expansions and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a pair and write its trace.
    Expand(ExpandArgs),
    /// Run bound suites on a trace, a pair or a random batch.
    Verify(VerifyArgs),
    /// Build an expansion from a growth plan and check it.
    Construct(ConstructArgs),
    /// Exhaustive small-height search around an exact pair.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    p: Option<u64>,
    /// `num/den` or `root:c0,...,cd@seed@N`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, default_value_t = 30)]
    depth: usize,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Trace file written by `expand` or `construct`.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "batch"])]
    trace: Option<PathBuf>,
    #[command(flatten)]
    pair: PairArgs,
    /// Number of random rational triples `(x, y, z)`, `|x|, |y|, z ≤ 10^4`.
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    n_max: Option<usize>,
    /// `A,B,C` for the relation `Aα + Bβ + C = 0`.
    #[arg(long, allow_hyphen_values = true)]
    relation: Option<String>,
    /// Polynomial relation `F` as `c:i:j,...` (term `c x^i y^j`).
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, default_value_t = 200)]
    height_cap: i64,
    #[arg(long, default_value_t = 2)]
    exponent_cap: u32,
    #[arg(long, default_value_t = 3)]
    search_n: usize,
    /// Directory for one report file per suite; stdout otherwise.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ConstructArgs {
    /// ℓ sequence, e.g. `1,1,1,...`; the last entry repeats.
    #[arg(long, group = "kind")]
    ell: Option<String>,
    /// `base,slope` for `ℓ_n = base + slope·n`.
    #[arg(long, group = "kind")]
    ell_linear: Option<String>,
    /// Relation degree `D`.
    #[arg(long = "D", group = "kind")]
    degree: Option<i64>,
    /// `k_n = 1` for every `n`.
    #[arg(long, group = "kind")]
    tight: bool,
    /// Plan override for `--D`, e.g. `affine:1,4,1,2`.
    #[arg(long, requires = "degree")]
    plan: Option<String>,
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace file for the constructed expansion.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report file; stdout otherwise.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    height_cap: i64,
    #[arg(long, default_value_t = 2)]
    exponent_cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure that maps to a specific exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CoreError>() {
            return match e {
                CoreError::InsufficientPrecision(_) | CoreError::PrecisionExhausted(_) => EXIT_PRECISION,
                _ => EXIT_USAGE,
            };
        }
    }
    EXIT_USAGE
}

fn prime(p: Option<u64>) -> Result<Prime> {
    let p = p.ok_or_else(|| usage("--p is required"))?;
    Ok(Prime::new(p)?)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Worker pool sized by `MCF_LAB_THREADS` when set.
fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MCF_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| usage(format!("MCF_LAB_THREADS must be an integer ≥ 1, got {v:?}")))?;
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

fn cmd_expand(args: ExpandArgs) -> Result<u8> {
    let p = prime(args.pair.p)?;
    let (Some(alpha), Some(beta)) = (&args.pair.alpha, &args.pair.beta) else {
        return Err(usage("--alpha and --beta are required"));
    };
    let run = trace_io::run_pair(p, alpha, beta, args.pair.depth)?;
    let text = match args.format {
        Format::Json => trace_io::to_json(&run)?,
        Format::Csv => trace_io::to_csv(&run)?,
    };
    write_out(args.out.as_deref(), &text)?;
    eprintln!(
        "status {}, {} pairs, certified prefix {}",
        run.trace.status(),
        run.trace.len(),
        run.trace.expansion.certified_prefix()
    );
    Ok(if trace_io::status_exhausted(&run) { EXIT_PRECISION } else { 0 })
}

/// Random triples `(x, y, z)` with `|x|, |y| ≤ 10^4`, `1 ≤ z ≤ 10^4`.
fn random_triples(count: usize, seed: u64) -> Vec<(i64, i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (
                rng.gen_range(-10_000..=10_000),
                rng.gen_range(-10_000..=10_000),
                rng.gen_range(1..=10_000),
            )
        })
        .collect()
}

fn emit_reports(reports: &[BoundReport], dir: Option<&Path>, format: Format) -> Result<()> {
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for r in reports {
        let (text, ext) = match format {
            Format::Json => (report_json(r)?, "json"),
            Format::Csv => (report_csv(r)?, "csv"),
        };
        match dir {
            Some(dir) => {
                let path = dir.join(format!("{}.{ext}", r.bound_name));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            None => print!("{text}"),
        }
    }
    Ok(())
}

fn summarize(reports: &[BoundReport]) -> u8 {
    let mut code = 0;
    for r in reports {
        let failed = r.rows.iter().filter(|x| !x.satisfied).count();
        eprintln!("{}: {} rows, {} violated", r.bound_name, r.rows.len(), failed);
        if failed > 0 {
            code = EXIT_VIOLATION;
        }
    }
    code
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let opts = SuiteOptions {
        n_max: args.n_max,
        relation: args.relation.clone(),
        poly: args.poly.clone(),
        caps: SearchCaps {
            height_cap: args.height_cap,
            exponent_cap: args.exponent_cap,
        },
        search_n: args.search_n,
    };
    let suites = args.suite.expand();
    let reports = if let Some(count) = args.batch {
        let p = Prime::new(args.pair.p.unwrap_or(5))?;
        verify_batch(p, count, args.seed, args.pair.depth, &suites, &opts)?
    } else {
        let run = match &args.trace {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                trace_io::read(&text).map_err(|e| usage(format!("{}: {e:#}", path.display())))?
            }
            None => {
                let p = prime(args.pair.p)?;
                let (Some(alpha), Some(beta)) = (&args.pair.alpha, &args.pair.beta) else {
                    return Err(usage("give --trace, --batch, or --p with --alpha and --beta"));
                };
                trace_io::run_pair(p, alpha, beta, args.pair.depth)?
            }
        };
        let mut out = Vec::new();
        for s in &suites {
            match run_suite(*s, &run, &opts)? {
                Some(r) => out.push(r),
                None if args.suite == Suite::All => {}
                None => return Err(usage(format!("suite {} does not apply to this trace", s.name()))),
            }
        }
        out
    };
    emit_reports(&reports, args.out_dir.as_deref(), args.format)?;
    Ok(summarize(&reports))
}

fn verify_batch(p: Prime, count: usize, seed: u64, depth: usize, suites: &[Suite], opts: &SuiteOptions) -> Result<Vec<BoundReport>> {
    let triples = random_triples(count, seed);
    let per_case: Vec<Vec<BoundReport>> = pool()?.install(|| {
        triples
            .par_iter()
            .map(|&(x, y, z)| -> Result<Vec<BoundReport>> {
                let (alpha, beta) = (format!("{x}/{z}"), format!("{y}/{z}"));
                let run = trace_io::run_pair(p, &alpha, &beta, depth)?;
                let mut out = Vec::with_capacity(suites.len());
                for s in suites {
                    let r = if *s == Suite::Steps {
                        let t = (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()), BigInt::from(z));
                        Some(step_bound_report(p, &[t])?)
                    } else {
                        run_suite(*s, &run, opts)?
                    };
                    out.push(r.unwrap_or_else(|| BoundReport::new(s.name())));
                }
                Ok(out)
            })
            .collect::<Result<_>>()
    })?;
    let mut merged = Vec::with_capacity(suites.len());
    for (j, s) in suites.iter().enumerate() {
        let mut m = BoundReport::new(s.name())
            .param("p", p)
            .param("cases", count)
            .param("seed", seed);
        let mut passing = 0;
        for (i, case) in per_case.iter().enumerate() {
            let r = case[j].clone();
            if r.all_hold() {
                passing += 1;
            }
            m.absorb(&format!("case{i}:"), r);
        }
        m.set_param("passing_cases", passing);
        merged.push(m);
    }
    Ok(merged)
}

fn cmd_construct(args: ConstructArgs) -> Result<u8> {
    let p = Prime::new(args.p)?;
    let n = args.n;
    let (run, reports) = if let Some(d) = args.degree {
        let plan = match &args.plan {
            Some(s) => plan::parse_plan(s)?,
            None => GrowthPlan::Degree(d),
        };
        let run = trace_io::run_degree(d, &plan, p, n, args.seed)?;
        let deep = run.deep.as_ref().expect("construction");
        let mut r = fast_relation_report(d, deep, &run.trace, n)?;
        r.set_param("margin", deep.len() - n - 1);
        r.set_param("plan", plan::format_plan(&plan));
        (run, vec![r])
    } else {
        let plan = if let Some(s) = &args.ell {
            plan::parse_ell(s)?
        } else if let Some(s) = &args.ell_linear {
            plan::parse_plan(&format!("ell-linear:{s}"))?
        } else if args.tight {
            GrowthPlan::Tight
        } else {
            return Err(usage("give one of --ell, --ell-linear, --D or --tight"));
        };
        let run = trace_io::run_construct(&plan, p, n + 1, args.seed, trace_io::default_margin())?;
        let reports = if plan == GrowthPlan::Tight {
            vec![check_rate_theorem(&run.trace, n)?, check_upper_bound(&run.trace, n)?]
        } else {
            let mut r = check_fast_construction(&run.trace, &plan, n)?;
            r.set_param("plan", plan::format_plan(&plan));
            vec![r]
        };
        (run, reports)
    };
    if let Some(out) = &args.out {
        fs::write(out, trace_io::to_json(&run)?).with_context(|| format!("writing {}", out.display()))?;
    }
    let mut text = serde_json::to_string_pretty(&reports)?;
    text.push('\n');
    write_out(args.report.as_deref(), &text)?;
    Ok(summarize(&reports))
}

fn cmd_search(args: SearchArgs) -> Result<u8> {
    let p = Prime::new(args.p)?;
    let alpha = parse_rational(&args.alpha)?;
    let beta = parse_rational(&args.beta)?;
    let caps = SearchCaps {
        height_cap: args.height_cap,
        exponent_cap: args.exponent_cap,
    };
    let r = pool()?.install(|| small_height_search(&alpha, &beta, p, args.n, caps))?;
    let triple = |h: &mcf_core::oracle::Hit| [format_rational(&h.t), format_rational(&h.u), h.v.to_string()];
    let doc = serde_json::json!({
        "p": p.get(),
        "alpha": format_rational(&alpha),
        "beta": format_rational(&beta),
        "n": r.n,
        "height_cap": caps.height_cap,
        "exponent_cap": caps.exponent_cap,
        "radius": r.radius,
        "hits": r.hits.iter().map(triple).collect::<Vec<_>>(),
        "violations": r.violations.iter().map(triple).collect::<Vec<_>>(),
        "undecided": r.undecided,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_out(args.out.as_deref(), &text)?;
    eprintln!("{} hits, {} violations, {} undecided", r.hits.len(), r.violations.len(), r.undecided);
    Ok(if r.violations.is_empty() { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Expand(a) => cmd_expand(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Search(a) => cmd_search(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
