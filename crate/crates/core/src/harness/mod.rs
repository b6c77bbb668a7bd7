//! Run configuration, report envelopes and the verification suites behind
//! the `struve-subord` binary.

mod verify;

pub use verify::{
    chain_points, lp_points, run_verify, Check, Suite, SuiteReport, VerificationReport, VerifyConfig, CHAIN_TOL,
    CLOSED_FORM_TOL, LP_ORDERS, LP_TOL, RATIO_CHAIN_TOL, RECURRENCE_TOL,
};

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::analytic::{complex_pair, DiskGrid};
use crate::struve::{closed_form_catalogue, struve_coeff};
use crate::subordination::{CampaignResult, ParamBox};
use crate::{Error, Result};

/// Version tag written into every report.
pub const SCHEMA_VERSION: &str = "v1";
/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "STRUVE_SUBORD_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

/// Effective settings of one invocation, echoed into its report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, with = "complex_pair::option", skip_serializing_if = "Option::is_none")]
    pub a: Option<Complex64>,
    #[serde(default, with = "complex_pair::option", skip_serializing_if = "Option::is_none")]
    pub c: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_box: Option<ParamBox>,
    pub grid: DiskGrid,
    pub trials: usize,
    pub seed: u64,
    pub order: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// Subcommand-specific settings (suite, campaign id, replay seed, ...).
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            a: None,
            c: None,
            param_box: None,
            grid: DiskGrid::default(),
            trials: 1,
            seed: 0,
            order: 32,
            output_path: None,
            format: Format::Json,
            extra: serde_json::Map::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.order < 8 {
            return Err(Error::Config(format!("order {} is below 8", self.order)));
        }
        Ok(())
    }
}

/// Top-level JSON document: schema tag, crate version, config echo, payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: &str, config: RunConfig, result: T) -> Self {
        Report {
            schema: format!("struve-subord/{kind}/{SCHEMA_VERSION}"),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Builds the global rayon pool, honoring [`THREADS_ENV`].
pub fn configure_threads() -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV}={raw} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    // a pool may already exist when called twice in one process
    let _ = builder.build_global();
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub n: usize,
    #[serde(with = "complex_pair")]
    pub value: Complex64,
    /// `|value - exact|` against the matching closed form, if any.
    pub catalogue_diff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub closed_form: Option<String>,
    pub rows: Vec<CoeffRow>,
}

/// The first `count` kernel coefficients `s_0..s_{count-1}` (the coefficients
/// of `z^1..z^count`), compared with a catalogue closed form when `(a, c)`
/// matches one.
pub fn coefficient_table(a: Complex64, c: Complex64, count: usize) -> Result<CoeffTable> {
    let catalogue = closed_form_catalogue(count.max(1));
    let entry = catalogue
        .iter()
        .find(|e| (Complex64::new(e.a(), 0.0) - a).norm() < 1e-14 && (Complex64::new(e.c, 0.0) - c).norm() < 1e-14);
    let rows = (0..count)
        .map(|n| {
            let value = struve_coeff(n, a, c)?;
            let catalogue_diff = entry.map(|e| (value - e.exact[n + 1].to_f64().unwrap_or(f64::NAN)).norm());
            Ok(CoeffRow { n, value, catalogue_diff })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffTable { closed_form: entry.map(|e| e.name.to_string()), rows })
}

impl CoeffTable {
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.closed_form {
            let _ = writeln!(out, "closed form: {name}");
        }
        let _ = writeln!(out, "{:>4}  {:>24}  {:>24}  {:>10}", "n", "re", "im", "diff");
        for r in &self.rows {
            let diff = r.catalogue_diff.map_or("-".to_string(), |d| format!("{d:.3e}"));
            let _ = writeln!(out, "{:>4}  {:>24.17e}  {:>24.17e}  {:>10}", r.n, r.value.re, r.value.im, diff);
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "re", "im", "catalogue_diff"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.value.re.to_string(),
                r.value.im.to_string(),
                r.catalogue_diff.map_or(String::new(), |d| d.to_string()),
            ])?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

impl VerificationReport {
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(out, "[{}] {}", if s.passed { "PASS" } else { "FAIL" }, s.suite);
            for c in &s.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                let _ = writeln!(out, "  {mark} {:<40} {:.3e} (tol {:.1e})", c.name, c.value, c.tolerance);
            }
        }
        out
    }
}

pub fn campaign_pretty(res: &CampaignResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "campaign {}: {} trials", res.campaign_id, res.trials);
    let _ = writeln!(out, "  hypothesis hits   {}", res.hypothesis_hits);
    let _ = writeln!(out, "  conclusion holds  {} ({} inside the tolerance band)", res.conclusion_holds, res.inconclusive);
    let _ = writeln!(out, "  counterexamples   {}", res.counterexamples.len());
    if let Some(m) = res.min_margin {
        let _ = writeln!(out, "  min margin        {m:.6e}");
    }
    for cx in &res.counterexamples {
        let _ = writeln!(
            out,
            "  replay seed {} (trial {}): a = {}, c = {}, M = {}, z* = {} {:+}i, value {:.6} >= {:.6}",
            cx.seed, cx.trial, cx.a, cx.c, cx.m, cx.witness.re, cx.witness.im, cx.value, cx.bound
        );
    }
    out
}
