//! Verification suites run by `verify`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::{chain_residual, ChainResidual, TransformKind};
use crate::analytic::unit_point;
use crate::struve::{closed_form_catalogue, lp_residual, max_abs_gap, recurrence_residual, u_series, StruveParams, CATALOGUE_ORDER};
use crate::subordination::{random_function_of_order, trial_seed};
use crate::{Error, Result};

pub const RECURRENCE_TOL: f64 = 1e-11;
pub const CLOSED_FORM_TOL: f64 = 1e-14;
pub const CHAIN_TOL: f64 = 1e-9;
pub const RATIO_CHAIN_TOL: f64 = 1e-8;
pub const LP_TOL: f64 = 1e-10;
/// Orders `p` of the rotation identity check.
pub const LP_ORDERS: [f64; 4] = [-0.5, 0.5, 1.0, 1.5];
const LP_POINTS: usize = 25;
/// Chain identities are sampled on 4 radii × 16 angles.
const CHAIN_RADII: [f64; 4] = [0.25, 0.5, 0.75, 0.95];
const CHAIN_ANGLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Recurrence,
    ClosedForms,
    ChainIdentities,
    LpIdentity,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 4] = [Suite::Recurrence, Suite::ClosedForms, Suite::ChainIdentities, Suite::LpIdentity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recurrence => "recurrence",
            Suite::ClosedForms => "closed-forms",
            Suite::ChainIdentities => "chain-identities",
            Suite::LpIdentity => "lp-identity",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub order: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trials: 100, seed: 0, order: 32 }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("verify needs at least one trial".into()));
        }
        if self.order < 8 {
            return Err(Error::Config(format!("order {} is below 8", self.order)));
        }
        Ok(())
    }
}

/// One measured quantity against its tolerance (`value <= tolerance`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, passed: value <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite, checks, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

pub fn run_verify(suite: Suite, config: &VerifyConfig) -> Result<VerificationReport> {
    config.validate()?;
    let suites = match suite {
        Suite::All => Suite::SINGLE.to_vec(),
        one => vec![one],
    };
    let suites = suites
        .into_iter()
        .map(|s| match s {
            Suite::Recurrence => recurrence_suite(config),
            Suite::ClosedForms => closed_form_suite(),
            Suite::ChainIdentities => chain_suite(config),
            Suite::LpIdentity => lp_suite(config),
            Suite::All => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerificationReport { suites, passed })
}

fn trial_rng(seed: u64, salt: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed ^ salt, i as u64))
}

fn max(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

fn recurrence_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let residuals = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(config.seed, 0x5ec, i);
            let a = Complex64::new(rng.random_range(0.2..6.0), rng.random_range(-1.0..1.0));
            let c = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let f = random_function_of_order(1.0, 0.5, rng.random(), config.order)?;
            recurrence_residual(&StruveParams::from_a(a, c)?, &f)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new(
        Suite::Recurrence,
        vec![
            Check::new(format!("max coefficient residual over {} trials", config.trials), max(residuals.into_iter()), RECURRENCE_TOL),
            Check::new("exact rational identity, a in 2..=8, n <= 20", exact_recurrence_defect(), 0.0),
        ],
    ))
}

/// Number of `(a, n)` pairs where `(n+1)/(a+1)_n != a/(a)_n - (a-1)/(a+1)_n`
/// in exact arithmetic.
fn exact_recurrence_defect() -> f64 {
    let poch = |x: i64, n: usize| -> BigRational {
        (0..n).fold(BigRational::one(), |acc, j| acc * BigRational::from_integer(BigInt::from(x + j as i64)))
    };
    let mut bad = 0;
    for a in 2..=8i64 {
        for n in 0..=20usize {
            let r = |v: i64| BigRational::from_integer(BigInt::from(v));
            let lhs = r(n as i64 + 1) / poch(a + 1, n);
            let rhs = r(a) / poch(a, n) - r(a - 1) / poch(a + 1, n);
            if !(lhs - rhs).is_zero() {
                bad += 1;
            }
        }
    }
    bad as f64
}

fn closed_form_suite() -> Result<SuiteReport> {
    let checks = closed_form_catalogue(CATALOGUE_ORDER)
        .iter()
        .map(|entry| {
            let series = u_series(Complex64::new(entry.a(), 0.0), Complex64::new(entry.c, 0.0), CATALOGUE_ORDER)?;
            Ok(Check::new(entry.name.to_string(), max_abs_gap(entry, &series), CLOSED_FORM_TOL))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new(Suite::ClosedForms, checks))
}

pub fn chain_points() -> Vec<Complex64> {
    CHAIN_RADII
        .iter()
        .flat_map(|&r| (0..CHAIN_ANGLES).map(move |j| r * unit_point(j, CHAIN_ANGLES)))
        .collect()
}

fn chain_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let points = chain_points();
    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(config.seed, 0xc4a1, i);
            // a - 3 stays clear of the poles
            let a = Complex64::new(rng.random_range(3.5..7.0), rng.random_range(-0.5..0.5));
            let c = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
            let f = random_function_of_order(1.0, 0.5, rng.random(), config.order)?;
            [TransformKind::Direct, TransformKind::Normalized, TransformKind::Ratio]
                .map(|kind| chain_residual(kind, a, c, &f, &points))
                .into_iter()
                .collect::<Result<Vec<ChainResidual>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = [("direct", CHAIN_TOL), ("normalized", CHAIN_TOL), ("ratio", RATIO_CHAIN_TOL)]
        .iter()
        .enumerate()
        .flat_map(|(k, &(name, tol))| {
            let worst = |pick: fn(&ChainResidual) -> f64| max(per_trial.iter().map(|t| pick(&t[k])));
            [
                Check::new(format!("{name} chain: tuple"), worst(|r| r.tuple), tol),
                Check::new(format!("{name} chain: beta - alpha"), worst(|r| r.beta_minus_alpha), tol),
                Check::new(format!("{name} chain: gamma - beta"), worst(|r| r.gamma_minus_beta), tol),
            ]
        })
        .collect();
    Ok(SuiteReport::new(Suite::ChainIdentities, checks))
}

/// `LP_POINTS` seeded points with `|z| <= 2` and `-π < arg z <= π/2`.
pub fn lp_points(seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 0x1b));
    (0..LP_POINTS)
        .map(|_| {
            let r: f64 = rng.random_range(0.05..=2.0);
            let theta: f64 = rng.random_range(-PI * 0.999..=PI / 2.0);
            Complex64::from_polar(r, theta)
        })
        .collect()
}

fn lp_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let points = lp_points(config.seed);
    let checks = LP_ORDERS
        .iter()
        .map(|&p| {
            let worst = points
                .iter()
                .map(|&z| lp_residual(Complex64::new(p, 0.0), z))
                .collect::<Result<Vec<_>>>()?;
            Ok(Check::new(format!("p = {p}"), max(worst.into_iter()), LP_TOL))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new(Suite::LpIdentity, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_identity_has_no_defect() {
        assert_eq!(exact_recurrence_defect(), 0.0);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig { trials: 3, seed: 1, order: 8 };
        let rep = run_verify(Suite::All, &cfg).unwrap();
        assert_eq!(rep.suites.len(), 4);
        for s in &rep.suites {
            assert!(s.passed, "{s:?}");
        }
    }

    #[test]
    fn lp_points_stay_in_sector() {
        for z in lp_points(9) {
            assert!(z.norm() <= 2.0 + 1e-15);
            assert!(z.arg() > -PI && z.arg() <= PI / 2.0);
        }
    }

    #[test]
    fn suite_names() {
        for s in Suite::SINGLE {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
