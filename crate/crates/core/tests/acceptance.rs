//! Exit criteria. Prints one line per criterion and exits nonzero when any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use struve_subord::admissibility::{
    check_admissibility, condition_bounds, condition_values, duality_holds, self_consistent_probe, ClassId, Mode,
    Variant,
};
use struve_subord::analytic::{unit, DiskGrid};
use struve_subord::harness::{chain_points, coefficient_table, lp_points, run_verify, Suite, VerifyConfig};
use struve_subord::struve::u_series;
use struve_subord::subordination::{example_sups, run_campaign, CampaignConfig, CampaignId, MajorantQ};

const RECURRENCE_TOL: f64 = 1e-11;
const RECURRENCE_TIME: Duration = Duration::from_secs(5);
const CLOSED_FORM_TOL: f64 = 1e-14;
const CLOSED_FORM_ORDER: usize = 24;
const CLOSED_FORM_TIME: Duration = Duration::from_secs(1);
const LP_TOL: f64 = 1e-10;
const CHAIN_TOL: f64 = 1e-9;
const RATIO_CHAIN_TOL: f64 = 1e-8;
const CHAIN_TRIALS: usize = 50;
const CHAIN_POINTS: usize = 64;
const CHAIN_TIME: Duration = Duration::from_secs(30);
const EXAMPLE_RADIUS: f64 = 0.999;
const EXAMPLE_ANGLES: usize = 512;
const CAMPAIGN_TRIALS: usize = 500;
const CAMPAIGN_TIME: Duration = Duration::from_secs(120);
const BETA_SLACK_TOL: f64 = 1e-12;
const DUALITY_PROBES: usize = 200;
const DUALITY_GAP: f64 = 1e-6;

// Grid sups at radius 0.999 with 512 angles, computed with the direct
// complex-function oracle below and frozen.
const H_SINH: f64 = 0.08885608520177414;
const C_COSH: f64 = 1.0849861604037223;
const H_SIN: f64 = 0.1750172628683648;
const C_COS: f64 = 0.08607223263635867;
const FROZEN_TOL: f64 = 1e-12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poch(x: i64, n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, j| acc * rational(x + j as i64))
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).fold(BigRational::one(), |acc, k| acc * rational(k))
}

fn recurrence() -> Outcome {
    let start = Instant::now();
    let rep = run_verify(Suite::Recurrence, &VerifyConfig { trials: 100, seed: 0, order: 32 }).unwrap();
    let elapsed = start.elapsed();
    let residual = rep.suites[0].checks[0].value;
    let mut defect = BigRational::zero();
    for a in 2..=8i64 {
        for n in 0..=20usize {
            let lhs = rational(n as i64 + 1) / poch(a + 1, n);
            let rhs = rational(a) / poch(a, n) - rational(a - 1) / poch(a + 1, n);
            defect += (lhs - rhs).abs();
        }
    }
    outcome(
        residual < RECURRENCE_TOL && defect.is_zero() && elapsed < RECURRENCE_TIME,
        format!("max residual {residual:.2e} (< {RECURRENCE_TOL:e}), exact defect {defect}, {elapsed:.2?}"),
    )
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    // (a, c, coefficient of z^m for m >= 1)
    type Term = fn(usize) -> BigRational;
    let entries: [(&str, f64, f64, Term); 4] = [
        ("2(cosh sqrt z - 1)", 2.0, -1.0, |m| rational(2) / factorial(2 * m)),
        ("sqrt z sinh sqrt z", 1.0, -1.0, |m| BigRational::one() / factorial(2 * m - 1)),
        ("2(1 - cos sqrt z)", 2.0, 1.0, |m| {
            let s = if m % 2 == 1 { 2 } else { -2 };
            rational(s) / factorial(2 * m)
        }),
        ("sqrt z sin sqrt z", 1.0, 1.0, |m| {
            let s = if m % 2 == 1 { 1 } else { -1 };
            rational(s) / factorial(2 * m - 1)
        }),
    ];
    let mut worst = 0.0f64;
    let mut names = Vec::new();
    for (name, a, cc, term) in entries {
        let series = u_series(c(a, 0.0), c(cc, 0.0), CLOSED_FORM_ORDER).unwrap();
        let mut gap = series.coeff(0).norm();
        for m in 1..=CLOSED_FORM_ORDER {
            gap = gap.max((series.coeff(m) - term(m).to_f64().unwrap()).norm());
        }
        worst = worst.max(gap);
        names.push(format!("{name} {gap:.1e}"));
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= CLOSED_FORM_TOL && elapsed < CLOSED_FORM_TIME,
        format!("worst gap {worst:.2e} (<= {CLOSED_FORM_TOL:e}) through z^{CLOSED_FORM_ORDER} [{}], {elapsed:.2?}", names.join(", ")),
    )
}

fn lp_identity() -> Outcome {
    let points = lp_points(0);
    let in_range = points.len() == 25 && points.iter().all(|z| z.norm() <= 2.0);
    let rep = run_verify(Suite::LpIdentity, &VerifyConfig { trials: 1, seed: 0, order: 32 }).unwrap();
    let worst = rep.suites[0].checks.iter().map(|c| c.value).fold(0.0, f64::max);
    let orders = rep.suites[0].checks.len();
    outcome(
        in_range && orders == 4 && worst <= LP_TOL,
        format!("worst residual {worst:.2e} (<= {LP_TOL:e}) over {} points x {orders} orders", points.len()),
    )
}

fn chain_identities() -> Outcome {
    let start = Instant::now();
    let rep =
        run_verify(Suite::ChainIdentities, &VerifyConfig { trials: CHAIN_TRIALS, seed: 0, order: 32 }).unwrap();
    let elapsed = start.elapsed();
    let checks = &rep.suites[0].checks;
    let (mut plain, mut ratio) = (0.0f64, 0.0f64);
    for chk in checks {
        if chk.name.starts_with("ratio") {
            ratio = ratio.max(chk.value);
        } else {
            plain = plain.max(chk.value);
        }
    }
    outcome(
        chain_points().len() == CHAIN_POINTS
            && checks.len() == 9
            && plain <= CHAIN_TOL
            && ratio <= RATIO_CHAIN_TOL
            && elapsed < CHAIN_TIME,
        format!(
            "direct/normalized {plain:.2e} (<= {CHAIN_TOL:e}), ratio {ratio:.2e} (<= {RATIO_CHAIN_TOL:e}), {CHAIN_TRIALS} trials x {CHAIN_POINTS} points, {elapsed:.2?}"
        ),
    )
}

/// Sups on the circle |z| = 0.999 evaluated with closed-form complex functions.
fn oracle_sups() -> [(f64, f64); 2] {
    let mut out = [(0.0f64, 0.0f64); 2];
    for j in 0..EXAMPLE_ANGLES {
        let z = Complex64::from_polar(EXAMPLE_RADIUS, std::f64::consts::TAU * j as f64 / EXAMPLE_ANGLES as f64);
        let s = z.sqrt();
        let hyper = (s * s.sinh() - 2.0 * (s.cosh() - 1.0)).norm();
        let cosh = 2.0 * (s.cosh() - 1.0).norm();
        let sin = (s.sin() / s - 1.0).norm();
        let cos = (2.0 * (1.0 - s.cos()) / z - 1.0).norm();
        out[0] = (out[0].0.max(hyper), out[0].1.max(cosh));
        out[1] = (out[1].0.max(sin), out[1].1.max(cos));
    }
    out
}

fn worked_examples() -> Outcome {
    let grid = DiskGrid::new(vec![EXAMPLE_RADIUS], EXAMPLE_ANGLES).unwrap();
    let oracle = oracle_sups();
    let frozen = [(H_SINH, C_COSH), (H_SIN, C_COS)];
    let mut passed = true;
    let mut parts = Vec::new();
    for ((id, label), ((h_or, c_or), (h_fz, c_fz))) in
        [(CampaignId::C16Example, "cosh"), (CampaignId::CosExample, "cos")].into_iter().zip(oracle.into_iter().zip(frozen))
    {
        let (h, cc) = example_sups(id, &grid).unwrap();
        let agree = [(h, h_or), (h, h_fz), (cc, c_or), (cc, c_fz)].iter().all(|(x, y)| (x - y).abs() <= FROZEN_TOL);
        passed &= agree;
        let mut failing = Vec::new();
        for m in [h + 0.01, 1.0, 2.0] {
            // premise < M must force conclusion < M
            if h < m && !(cc < m) {
                failing.push(format!("{m:.4}"));
            }
        }
        passed &= failing.is_empty();
        parts.push(format!(
            "{label}: H {h:.6} C {cc:.6}{}{}",
            if agree { "" } else { " (disagrees with frozen oracle)" },
            if failing.is_empty() { ", implication holds".to_string() } else { format!(", implication fails at M = {}", failing.join(", ")) }
        ));
    }
    outcome(passed, parts.join("; "))
}

fn campaigns() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    let mut parts = Vec::new();
    for id in [CampaignId::C15, CampaignId::C16, CampaignId::C20, CampaignId::C21, CampaignId::E345] {
        let cfg = CampaignConfig { trials: CAMPAIGN_TRIALS, seed: 0, ..CampaignConfig::new(id) };
        let res = run_campaign(&cfg).unwrap();
        total += res.counterexamples.len();
        let replay = res.counterexamples.first().map_or(String::new(), |cx| format!(" replay seed {}", cx.seed));
        parts.push(format!("{id} {}/{} hits, {} cx{replay}", res.hypothesis_hits, res.trials, res.counterexamples.len()));
    }
    let elapsed = start.elapsed();
    outcome(total == 0 && elapsed < CAMPAIGN_TIME, format!("{} ({elapsed:.2?})", parts.join("; ")))
}

fn admissibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_beta = 0.0f64;
    let mut probes = 0;
    for class in ClassId::ALL {
        for trial in 0..20 {
            let m: f64 = if trial % 2 == 0 { rng.random_range(0.2..0.8) } else { rng.random_range(1.2..2.0) };
            let q = if class == ClassId::D4 || (class != ClassId::D15 && trial % 3 == 0) {
                MajorantQ::affine(m).unwrap()
            } else {
                MajorantQ::linear(m).unwrap()
            };
            let order: f64 = rng.random_range(2.0..4.0);
            let mode =
                if class.is_superordination() { Mode::Superordination { m: order } } else { Mode::Subordination { k: order } };
            let a = c(rng.random_range(3.5..6.0), rng.random_range(-0.5..0.5));
            let zeta = unit(rng.random_range(-3.1..3.1));
            let probe = self_consistent_probe(class, &q, zeta, mode, a, 0.1).unwrap();
            let out = check_admissibility(&probe, class, &q, a, Variant::AsDefinition).unwrap();
            worst_beta = worst_beta.max(out.slack[0]);
            probes += 1;
        }
    }

    let q = MajorantQ::linear(1.0).unwrap();
    let (k, m) = (2.0, 2.0);
    let (mut checked, mut dual_ok, mut orient_ok) = (0, 0, 0);
    while checked < DUALITY_PROBES {
        let mut z = || c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let tuple = struve_subord::admissibility::GreekTuple::new(z(), z(), z(), z()).unwrap();
        let a = c(rng.random_range(3.5..6.0), rng.random_range(-0.5..0.5));
        let zeta = unit(rng.random_range(-3.1..3.1));
        let Ok([v, _]) = condition_values(ClassId::D1, &tuple, a, k, Variant::AsDefinition) else { continue };
        let bound = v + rng.random_range(-3.0..3.0);
        if (v - bound).abs() < DUALITY_GAP {
            continue;
        }
        checked += 1;
        let [v7, _] = condition_values(ClassId::D7, &tuple, a, m, Variant::AsDefinition).unwrap();
        let readings_disagree = (v >= bound) != (v7 <= bound);
        if readings_disagree
            && duality_holds(ClassId::D1, &tuple, a, bound).unwrap()
            && duality_holds(ClassId::D7, &tuple, a, bound).unwrap()
        {
            dual_ok += 1;
        }
        // the evaluators orient the second condition as >= for D1 and <= for D7
        let sub = struve_subord::admissibility::AdmissibilityProbe::at(tuple, zeta, Mode::Subordination { k }).unwrap();
        let sup = struve_subord::admissibility::AdmissibilityProbe::at(tuple, zeta, Mode::Superordination { m }).unwrap();
        let b1 = condition_bounds(&q, zeta, Mode::Subordination { k }).unwrap()[0];
        let b7 = condition_bounds(&q, zeta, Mode::Superordination { m }).unwrap()[0];
        let d1 = check_admissibility(&sub, ClassId::D1, &q, a, Variant::AsDefinition).unwrap();
        let d7 = check_admissibility(&sup, ClassId::D7, &q, a, Variant::AsDefinition).unwrap();
        if (d1.slack[1] - (v - b1)).abs() <= 1e-12 * (1.0 + v.abs()) && (d7.slack[1] - (b7 - v)).abs() <= 1e-12 * (1.0 + v.abs()) {
            orient_ok += 1;
        }
    }
    outcome(
        worst_beta < BETA_SLACK_TOL && dual_ok == DUALITY_PROBES && orient_ok == DUALITY_PROBES,
        format!(
            "beta slack {worst_beta:.2e} (< {BETA_SLACK_TOL:e}) over {probes} self-consistent probes; duality {dual_ok}/{DUALITY_PROBES}, orientation {orient_ok}/{DUALITY_PROBES}"
        ),
    )
}

/// Nulls are allowed only where the schema has optional fields.
const OPTIONAL_KEYS: [&str; 7] = ["closed_form", "min_margin", "margin", "witness", "witness_value", "lambda1", "catalogue_diff"];

fn non_finite(v: &Value, key: &str, path: &mut Vec<String>, bad: &mut Vec<String>) {
    match v {
        Value::Null if !OPTIONAL_KEYS.contains(&key) => bad.push(path.join(".")),
        Value::Number(n) if !n.as_f64().is_some_and(f64::is_finite) => bad.push(path.join(".")),
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                path.push(i.to_string());
                non_finite(x, key, path, bad);
                path.pop();
            }
        }
        Value::Object(map) => {
            for (k, x) in map {
                path.push(k.clone());
                non_finite(x, k, path, bad);
                path.pop();
            }
        }
        _ => {}
    }
}

fn scan<T: Serialize>(label: &str, value: &T, bad: &mut Vec<String>) {
    let v = serde_json::to_value(value).unwrap();
    let mut found = Vec::new();
    non_finite(&v, "", &mut vec![label.to_string()], &mut found);
    bad.extend(found);
}

fn hygiene() -> Outcome {
    let cfg = VerifyConfig::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let rep = pool.install(|| run_verify(Suite::All, &cfg)).unwrap();
        serde_json::to_string(&rep).unwrap()
    };
    let one = run(1);
    let four = run(4);
    let deterministic = one == four;

    let mut bad = Vec::new();
    scan("verify", &serde_json::from_str::<Value>(&one).unwrap(), &mut bad);
    for id in CampaignId::ALL {
        let cfg = CampaignConfig { trials: 40, seed: 3, ..CampaignConfig::new(id) };
        scan(id.name(), &run_campaign(&cfg).unwrap(), &mut bad);
    }
    for (a, cc) in [(2.0, -1.0), (1.0, 1.0), (2.5, 0.3)] {
        scan("coeffs", &coefficient_table(c(a, 0.0), c(cc, 0.0), 24).unwrap(), &mut bad);
    }
    outcome(
        deterministic && bad.is_empty(),
        format!(
            "verify all identical on 1 and 4 threads: {deterministic}; non-finite fields: {}",
            if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("recurrence", recurrence),
        ("closed forms", closed_forms),
        ("L_p rotation identity", lp_identity),
        ("chain identities", chain_identities),
        ("worked examples", worked_examples),
        ("corollary campaigns", campaigns),
        ("admissibility evaluators", admissibility),
        ("numerical hygiene", hygiene),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
            });
        if !out.passed {
            failures += 1;
        }
        println!("criterion {} [{}] {name}: {}", i + 1, if out.passed { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
