//! Acceptance criteria 1-10. Each test writes one `criterion N: PASS|FAIL`
//! line to stderr (unbuffered, so it shows even when output is captured)
//! and then asserts.

use std::io::Write;

use mcf_core::analysis::{
    check_fast_construction, check_rate_theorem, check_upper_bound, convergent_sequence, fast_relation_suite,
    growth_bound, linear_dependence_monitor, proxy_trace, relation_propagation_check, step_bound, tilde_x, truncation_sequence,
    GrowthPlan, RelationPoly, PROXY_MARGIN,
};
use mcf_core::engine::{certified_prefix_radius, expand, identity_checks, ExpansionTrace, Status};
use mcf_core::oracle::{naive_balanced_expand, rational_jp, small_height_search, SearchCaps};
use mcf_core::padic::{balanced_digits, parse_scalar, PAdicScalar, Prime};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    let line = format!(
        "criterion {n} [{name}]: {} ({detail})\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `n / (u p^e)` with `|n|, u ≤ 10^4`, `e ≤ 2`.
fn random_rational(rng: &mut ChaCha8Rng, p: Prime) -> BigRational {
    let n: i64 = rng.gen_range(-10_000..=10_000);
    let u: i64 = rng.gen_range(1..=10_000);
    let e: u32 = rng.gen_range(0..=2);
    q(n, u * (p.get() as i64).pow(e))
}

fn exact_trace(p: Prime, a: &BigRational, b: &BigRational, depth: usize) -> ExpansionTrace {
    let (x, y) = (PAdicScalar::exact(p, a.clone()), PAdicScalar::exact(p, b.clone()));
    let e = expand(&x, &y, depth).unwrap();
    ExpansionTrace::from_inputs("acceptance", &x, &y, e).unwrap()
}

const PRIMES: [u64; 3] = [5, 7, 11];

#[test]
fn criterion_01_exact_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut failures, mut rows) = (0, 0);
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..200 {
        let p = prime(PRIMES[i % 3]);
        let (a, b) = (random_rational(&mut rng, p), random_rational(&mut rng, p));
        let t = exact_trace(p, &a, &b, 30);
        let r = identity_checks(&t, 30).unwrap();
        rows += r.rows.len();
        seen.extend(r.rows.iter().map(|x| x.label.clone()));
        if !r.all_hold() {
            failures += 1;
        }
    }
    let labels = ["det", "nu_C", "tilde", "diff"].iter().all(|l| seen.contains(*l));
    verdict(
        1,
        "exact identities",
        failures == 0 && labels,
        &format!("200 pairs, {rows} rows, {failures} failing pairs, labels {seen:?}"),
    );
}

#[test]
fn criterion_02_rate_bounds() {
    let mut failures = 0;
    let mut certified = usize::MAX;
    for seed in 0..100u64 {
        let p = prime(PRIMES[seed as usize % 3]);
        let plan = GrowthPlan::Generic { max_k: 3 };
        let t = proxy_trace(&plan, p, 40, seed, PROXY_MARGIN).unwrap();
        let r = check_rate_theorem(&t, 40).unwrap();
        let through: usize = r.params["certified_through"].parse().unwrap_or(0);
        certified = certified.min(through);
        if !r.all_hold() {
            failures += 1;
        }
    }
    verdict(
        2,
        "rate bounds",
        failures == 0 && certified == 40,
        &format!("100 constructions, {failures} failing, certified through n = {certified} in every run"),
    );
}

#[test]
fn criterion_03_tightness() {
    let mut bad = Vec::new();
    for seed in 0..10u64 {
        let p = prime(PRIMES[seed as usize % 3]);
        let t = proxy_trace(&GrowthPlan::Tight, p, 40, seed, PROXY_MARGIN).unwrap();
        let rate = check_rate_theorem(&t, 40).unwrap();
        let upper = check_upper_bound(&t, 40).unwrap();
        let mins: Vec<_> = rate.rows_labelled("min").collect();
        let sums: Vec<_> = upper.rows_labelled("sum").collect();
        let ok = mins.len() == 41
            && mins.iter().all(|r| r.satisfied && r.tight)
            && sums.len() == 40
            && sums.iter().all(|r| r.satisfied && r.tight && r.rhs == mcf_core::report::Quantity::int(r.n + 1));
        if !ok {
            bad.push(seed);
        }
    }
    verdict(
        3,
        "tightness for k_n = 1",
        bad.is_empty(),
        &format!("10 runs to n = 40, failing seeds {bad:?}"),
    );
}

#[test]
fn criterion_04_fast_construction() {
    let p = prime(5);
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, plan) in [
        ("l_n = 1", GrowthPlan::Ell(vec![1])),
        ("l_n = n+1", GrowthPlan::EllLinear { base: 1, slope: 1 }),
    ] {
        for seed in 0..3 {
            let t = proxy_trace(&plan, p, 20, seed, PROXY_MARGIN).unwrap();
            let r = check_fast_construction(&t, &plan, 20).unwrap();
            let pass = r.all_hold() && r.rows.len() == 21;
            ok &= pass;
            notes.push(format!("{name} seed {seed}: {}", if pass { "ok" } else { "fail" }));
        }
    }
    for d in [1, 2] {
        let r = fast_relation_suite(d, &GrowthPlan::Degree(d), p, 20, 0).unwrap();
        let through: i64 = r.params["limit_certified_through"].parse().unwrap();
        let pass = r.all_hold() && r.rows.len() == 21 && through == 20;
        ok &= pass;
        notes.push(format!("D = {d}: C = {}, n0 = {}, {}", r.params["C"], r.params["n0"], if pass { "ok" } else { "fail" }));
    }
    verdict(4, "fast construction", ok, &notes.join("; "));
}

/// `p^e · r/s` with `r ≠ 0` and `p ∤ s`.
fn small_perturbation(rng: &mut ChaCha8Rng, p: Prime, e: i64) -> BigRational {
    let r: i64 = loop {
        let r = rng.gen_range(-1000..=1000);
        if r != 0 {
            break r;
        }
    };
    let s: i64 = loop {
        let s = rng.gen_range(1..=1000);
        if s % p.get() as i64 != 0 {
            break s;
        }
    };
    q(r, s) * p.pow_rational(e)
}

#[test]
fn criterion_05_prefix_stability() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checks, mut violations) = (0, 0);
    for i in 0..200 {
        let p = prime(PRIMES[i % 3]);
        let (a, b) = (random_rational(&mut rng, p), random_rational(&mut rng, p));
        let e = expand(&PAdicScalar::exact(p, a.clone()), &PAdicScalar::exact(p, b.clone()), 9).unwrap();
        for n in 0..e.len().min(9) {
            let radius = certified_prefix_radius(&e, n);
            let a2 = &a + small_perturbation(&mut rng, p, radius + 1);
            let b2 = &b + small_perturbation(&mut rng, p, radius + 1);
            let e2 = expand(&PAdicScalar::exact(p, a2), &PAdicScalar::exact(p, b2), n + 1).unwrap();
            checks += 1;
            if e2.len() < n + 1 || e2.a()[..=n] != e.a()[..=n] || e2.b()[..=n] != e.b()[..=n] {
                violations += 1;
            }
        }
    }
    verdict(
        5,
        "prefix stability",
        violations == 0 && checks > 200,
        &format!("{checks} perturbations, {violations} changed a prefix"),
    );
}

#[test]
fn criterion_06_termination_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = Vec::new();
    for i in 0..100 {
        let p = prime([5, 7][i % 2]);
        let x = BigRational::from_integer(rng.gen_range(-10_000i64..=10_000).into());
        let y = BigRational::from_integer(rng.gen_range(-10_000i64..=10_000).into());
        let z = BigInt::from(rng.gen_range(1i64..=10_000));
        let sb = step_bound(p, &x, &y, &z).unwrap();
        if !(sb.within_bound && sb.chain_holds) {
            violations.push((x, y, z, sb.actual_steps, sb.ceil_bound));
        }
    }
    let w = step_bound(prime(5), &q(32, 1), &q(26, 1), &BigInt::from(5)).unwrap();
    let worked = w.m == q(77, 10) && w.actual_steps == 2 && (w.actual_steps as u64) <= w.ceil_bound;
    verdict(
        6,
        "termination bound",
        violations.is_empty() && worked,
        &format!(
            "100 triples, violations {violations:?}; worked instance M = {}, steps {}, bound in [{}, {}]",
            w.m,
            w.actual_steps,
            w.bound.0,
            w.bound.1
        ),
    );
}

fn float_bisect(p: f64) -> f64 {
    let f = |x: f64| x * x * x - x * x / 2.0 - x / (2.0 * p) - 1.0 / (p * p * p);
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..80 {
        let m = 0.5 * (lo + hi);
        if f(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_07_tilde_x() {
    let half = q(1, 2);
    let one = q(1, 1);
    let mut ok = true;
    let mut mids = Vec::new();
    for p in [3u64, 5, 7, 11, 101, 10007] {
        let tx = tilde_x(prime(p), 64);
        ok &= tx.lo > half && tx.hi < one && tx.sign_change();
        if [5, 101, 10007].contains(&p) {
            mids.push(tx.midpoint().to_f64().unwrap());
        }
    }
    let mid5 = mids[0];
    let reference = float_bisect(5.0);
    ok &= (mid5 - reference).abs() < 1e-3;
    ok &= mids.windows(2).all(|w| w[1] < w[0] && w[1] > 0.5);
    let quoted = (mid5 - 0.669).abs();
    verdict(
        7,
        "x~ enclosures",
        ok,
        &format!(
            "p = 5 midpoint {mid5:.6}, independent bisection {reference:.6}; midpoints for 5, 101, 10007: {mids:?}; \
             distance to the quoted 0.669 is {quoted:.5}"
        ),
    );
}

#[test]
fn criterion_08_growth_and_heights() {
    let mut failing = 0;
    let mut lower_rows = 0;
    for seed in 0..50u64 {
        let p = prime(PRIMES[seed as usize % 3]);
        let t = proxy_trace(&GrowthPlan::Generic { max_k: 3 }, p, 40, seed, PROXY_MARGIN).unwrap();
        let r = growth_bound(&t, 40).unwrap();
        lower_rows += r.rows_labelled("lower").count();
        if !r.all_hold() || r.rows_labelled("upper").count() != 41 {
            failing += 1;
        }
    }
    let p = prime(5);
    let caps = SearchCaps {
        height_cap: 200,
        exponent_cap: 2,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut searches, mut hits, mut violations, mut undecided) = (0, 0, 0, 0);
    let mut pairs = 0;
    while pairs < 10 {
        let (a, b) = (random_rational(&mut rng, p), random_rational(&mut rng, p));
        let e = expand(&PAdicScalar::exact(p, a.clone()), &PAdicScalar::exact(p, b.clone()), 5).unwrap();
        if e.len() < 5 {
            continue;
        }
        pairs += 1;
        for n in 0..=3 {
            let r = small_height_search(&a, &b, p, n, caps).unwrap();
            searches += 1;
            hits += r.hits.len();
            violations += r.violations.len();
            undecided += r.undecided;
        }
    }
    verdict(
        8,
        "growth and heights",
        failing == 0 && violations == 0 && undecided == 0,
        &format!(
            "50 runs to n = 40, {failing} failing, {lower_rows} floor rows; {searches} searches, {hits} hits, \
             {violations} violations, {undecided} undecided"
        ),
    );
}

#[test]
fn criterion_09_dependence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let roots = [
        (5u64, "root:-6,0,1@1@120"),
        (5, "root:-6,0,1@4@120"),
        (7, "root:-2,0,1@3@120"),
        (11, "root:-3,0,1@5@120"),
        (7, "root:-6,0,0,1@3@120"),
    ];
    let mut failing = 0;
    let mut rows = 0;
    // rows where S_n = +(A V^α + B V^β) as well, i.e. both sides vanish
    let mut literal = 0;
    for i in 0..50 {
        let (a_c, b_c, c_c) = (
            rng.gen_range(-20i64..=20),
            loop {
                let b = rng.gen_range(-20i64..=20);
                if b != 0 {
                    break b;
                }
            },
            rng.gen_range(-20i64..=20),
        );
        let (big_a, big_b, big_c) = (q(a_c, 1), q(b_c, 1), q(c_c, 1));
        let (p, alpha) = if i % 2 == 0 {
            let p = prime(PRIMES[i % 3]);
            (p, PAdicScalar::exact(p, random_rational(&mut rng, p)))
        } else {
            let (p, lit) = roots[i % roots.len()];
            let p = prime(p);
            (p, parse_scalar(lit, p).unwrap())
        };
        // β = −(Aα + C)/B
        let beta = PAdicScalar::exact(p, big_a.clone())
            .mul(&alpha)
            .unwrap()
            .add(&PAdicScalar::exact(p, big_c.clone()))
            .unwrap()
            .div(&PAdicScalar::exact(p, -big_b.clone()))
            .unwrap();
        let e = expand(&alpha, &beta, 30).unwrap();
        let t = ExpansionTrace::from_inputs("relation", &alpha, &beta, e).unwrap();
        let r = linear_dependence_monitor(&t, (&big_a, &big_b, &big_c), 30).unwrap();
        rows += r.rows.len();
        literal += r.params["literal_sign_rows"].parse::<usize>().unwrap();
        if !r.all_hold() || r.params["relation_holds"] != "true" {
            failing += 1;
        }
    }

    let f = RelationPoly::parse("1:0:1,-1:2:0").unwrap();
    let mut f_rows = 0;
    let mut u_rows = 0;
    let mut hensel_failing = 0;
    // α² must be irrational, or β is rational and the run stops at once
    for (p, lit) in [
        (5u64, "root:-2,0,0,1@3@400"),
        (5, "root:-1,-1,0,1@2@400"),
        (7, "root:-6,0,0,1@3@400"),
        (11, "root:-3,0,0,1@9@400"),
    ] {
        let p = prime(p);
        let alpha = parse_scalar(lit, p).unwrap();
        let beta = alpha.mul(&alpha).unwrap();
        let e = expand(&alpha, &beta, 40).unwrap();
        let t = ExpansionTrace::from_inputs(lit, &alpha, &beta, e).unwrap();
        for approx in [convergent_sequence(&t, 40).unwrap(), truncation_sequence(&alpha, &beta, 40)] {
            let r = relation_propagation_check(&f, &approx, &alpha, &beta, 40).unwrap();
            f_rows += r.rows_labelled("F").count();
            u_rows += r.rows_labelled("U").count();
            if !r.all_hold() || r.rows_labelled("F").count() < 30 {
                hensel_failing += 1;
            }
        }
    }
    verdict(
        9,
        "dependence machinery",
        failing == 0 && hensel_failing == 0,
        &format!(
            "50 linear relations, {rows} rows of S_n = -(A V^a + B V^b), {failing} failing, \
             unsigned form holds on {literal} rows; Y - X^2 at precision 400: {f_rows} F rows, \
             {u_rows} U rows, {hensel_failing} failing"
        ),
    );
}

#[test]
fn criterion_10_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut digit_mismatch = 0;
    for i in 0..1000 {
        let p = prime(PRIMES[i % 3]);
        let x = random_rational(&mut rng, p);
        let v = p.rational_valuation(&x).unwrap_or(0);
        let lo = v - rng.gen_range(0..=2);
        let hi = lo + rng.gen_range(0..=24);
        let fast = balanced_digits(&x, p, lo, hi);
        let slow = naive_balanced_expand(&x, p, lo, hi);
        if fast != slow {
            digit_mismatch += 1;
        }
        // windows starting above the valuation must fail identically
        if !x.is_zero() {
            let (f2, s2) = (balanced_digits(&x, p, v + 1, v + 3), naive_balanced_expand(&x, p, v + 1, v + 3));
            if f2 != s2 || f2.is_ok() {
                digit_mismatch += 1;
            }
        }
    }
    let mut step_mismatch = 0;
    for i in 0..1000 {
        let p = prime(PRIMES[i % 3]);
        let x = BigRational::from_integer(rng.gen_range(-10_000i64..=10_000).into());
        let y = BigRational::from_integer(rng.gen_range(-10_000i64..=10_000).into());
        let z = BigInt::from(rng.gen_range(1i64..=10_000));
        let oracle = rational_jp(&x, &y, &z, p);
        let zr = BigRational::from_integer(z);
        let e = expand(&PAdicScalar::exact(p, &x / &zr), &PAdicScalar::exact(p, &y / &zr), 200).unwrap();
        let digits: Vec<(BigRational, BigRational)> =
            e.a().iter().zip(e.b()).map(|(a, b)| (a.value(p), b.value(p))).collect();
        let same = oracle.terminated
            && oracle.invariants_hold
            && e.status() == Status::Finite(oracle.steps)
            && digits == oracle.digits;
        if !same {
            step_mismatch += 1;
        }
    }
    verdict(
        10,
        "oracle agreement",
        digit_mismatch == 0 && step_mismatch == 0,
        &format!("1000 digit windows, {digit_mismatch} mismatches; 1000 runs, {step_mismatch} step mismatches"),
    );
}
