//! Text form of growth plans: `ell:1,1,2`, `ell-linear:1,1`, `degree:2`,
//! `affine:1,4,1,2`, `tight`, `generic:3`.

use anyhow::{anyhow, bail, Result};
use mcf_core::analysis::GrowthPlan;

fn ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty() && *t != "..." && *t != "…")
        .map(|t| t.parse::<i64>().map_err(|_| anyhow!("bad integer {t:?} in plan")))
        .collect()
}

fn exactly<const N: usize>(s: &str) -> Result<[i64; N]> {
    let v = ints(s)?;
    v.try_into().map_err(|_| anyhow!("expected {N} integers, got {s:?}"))
}

pub fn parse_plan(s: &str) -> Result<GrowthPlan> {
    let (kind, args) = s.split_once(':').unwrap_or((s, ""));
    let plan = match kind {
        "ell" => GrowthPlan::Ell(ints(args)?),
        "ell-linear" => {
            let [base, slope] = exactly(args)?;
            GrowthPlan::EllLinear { base, slope }
        }
        "degree" => GrowthPlan::Degree(exactly::<1>(args)?[0]),
        "affine" => {
            let [k_mult, k_add, h_mult, h_add] = exactly(args)?;
            GrowthPlan::Affine {
                k_mult,
                k_add,
                h_mult,
                h_add,
            }
        }
        "tight" => GrowthPlan::Tight,
        "generic" => GrowthPlan::Generic {
            max_k: exactly::<1>(args)?[0],
        },
        _ => bail!("unknown plan {s:?}"),
    };
    plan.validate()?;
    Ok(plan)
}

pub fn format_plan(plan: &GrowthPlan) -> String {
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    match plan {
        GrowthPlan::Ell(v) => format!("ell:{}", join(v)),
        GrowthPlan::EllLinear { base, slope } => format!("ell-linear:{base},{slope}"),
        GrowthPlan::Degree(d) => format!("degree:{d}"),
        GrowthPlan::Affine {
            k_mult,
            k_add,
            h_mult,
            h_add,
        } => format!("affine:{k_mult},{k_add},{h_mult},{h_add}"),
        GrowthPlan::Tight => "tight".into(),
        GrowthPlan::Generic { max_k } => format!("generic:{max_k}"),
    }
}

/// The `--ell` flag: a comma list, optionally ending in `...`.
pub fn parse_ell(s: &str) -> Result<GrowthPlan> {
    let plan = GrowthPlan::Ell(ints(s)?);
    plan.validate()?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["ell:1,2,3", "ell-linear:1,1", "degree:2", "affine:1,4,1,2", "tight", "generic:3"] {
            assert_eq!(format_plan(&parse_plan(s).unwrap()), s);
        }
        assert_eq!(parse_ell("1,1,1,...").unwrap(), GrowthPlan::Ell(vec![1, 1, 1]));
        assert!(parse_ell("0,1").is_err());
        assert!(parse_plan("ell-linear:1").is_err());
    }
}
