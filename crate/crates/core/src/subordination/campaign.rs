//! Seeded Monte-Carlo implication tests: draw `f` and parameters, certify the
//! premises on the closed disk of the outer grid radius, then look for a grid
//! point that breaks the conclusion.
//!
//! Testing on `|z| <= R` with the stated bounds is the corollary itself for
//! `f(Rz)/R`: every premise and conclusion is either homogeneous of degree one
//! in the function values (bounds scale with `R`) or written in `S f / z` form.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::random::{random_function_of_order, trial_seed};
use super::region::Region;
use crate::analytic::{complex_pair, unit_point, DiskGrid, NormalizedFunction, TaylorSeries};
use crate::struve::{apply_operator, u_series};
use crate::{Error, Result, DEFAULT_R_CERT, EPS_STRICT, POLE_RADIUS};

/// Truncation order of the random test functions and kernels.
pub const CAMPAIGN_ORDER: usize = 32;
/// Relative spread of `M` above its smallest certified value in tight trials.
const TIGHT_SPREAD: f64 = 0.05;
/// Values of `M` used by the worked examples, besides `H + 0.01`.
const EXAMPLE_LEVELS: [f64; 2] = [1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CampaignId {
    #[serde(rename = "c15")]
    C15,
    #[serde(rename = "c16")]
    C16,
    #[serde(rename = "c20")]
    C20,
    #[serde(rename = "c21")]
    C21,
    #[serde(rename = "e345")]
    E345,
    #[serde(rename = "c16-example")]
    C16Example,
    #[serde(rename = "cos-example")]
    CosExample,
    #[serde(rename = "c9")]
    C9,
    #[serde(rename = "c10")]
    C10,
    #[serde(rename = "c10a")]
    C10a,
}

impl CampaignId {
    pub const ALL: [CampaignId; 10] = [
        CampaignId::C15,
        CampaignId::C16,
        CampaignId::C20,
        CampaignId::C21,
        CampaignId::E345,
        CampaignId::C16Example,
        CampaignId::CosExample,
        CampaignId::C9,
        CampaignId::C10,
        CampaignId::C10a,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignId::C15 => "c15",
            CampaignId::C16 => "c16",
            CampaignId::C20 => "c20",
            CampaignId::C21 => "c21",
            CampaignId::E345 => "e345",
            CampaignId::C16Example => "c16-example",
            CampaignId::CosExample => "cos-example",
            CampaignId::C9 => "c9",
            CampaignId::C10 => "c10",
            CampaignId::C10a => "c10a",
        }
    }

    pub fn is_example(self) -> bool {
        matches!(self, CampaignId::C16Example | CampaignId::CosExample)
    }

    pub fn is_sandwich(self) -> bool {
        matches!(self, CampaignId::C9 | CampaignId::C10 | CampaignId::C10a)
    }

    /// Operator indices `a + j` the campaign evaluates.
    fn shifts(self) -> &'static [i32] {
        match self {
            CampaignId::C21 | CampaignId::C10a => &[-1, 0, 1],
            CampaignId::C16Example | CampaignId::CosExample => &[],
            _ => &[0, 1],
        }
    }
}

impl fmt::Display for CampaignId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CampaignId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CampaignId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<_> = CampaignId::ALL.iter().map(|id| id.name()).collect();
            Error::Config(format!("unknown campaign '{s}'; expected one of {}", names.join(", ")))
        })
    }
}

/// Sampling ranges. `m` is the range of `M` (of `λ2` for sandwich campaigns).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamBox {
    pub a: [f64; 2],
    pub c: [f64; 2],
    pub m: [f64; 2],
    pub k: f64,
}

impl ParamBox {
    pub fn default_for(id: CampaignId) -> Self {
        let a = match id {
            CampaignId::C21 | CampaignId::C10a => [1.1, 4.0],
            _ => [1.0, 4.0],
        };
        ParamBox { a, c: [-2.0, 2.0], m: [0.2, 2.0], k: 2.0 }
    }

    fn contains_a(&self, v: f64) -> bool {
        self.a[0] - POLE_RADIUS <= v && v <= self.a[1] + POLE_RADIUS
    }

    pub fn validate(&self, id: CampaignId) -> Result<()> {
        for (name, [lo, hi]) in [("a", self.a), ("c", self.c), ("M", self.m)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!("{name} range [{lo}, {hi}] is empty or not finite")));
            }
        }
        if self.m[0] <= 0.0 {
            return Err(Error::Config(format!("M range must be positive, got [{}, {}]", self.m[0], self.m[1])));
        }
        if !(self.k >= 2.0 && self.k.is_finite()) {
            return Err(Error::Config(format!("k = {} must be at least 2", self.k)));
        }
        let k = self.k;
        let hypothesis = match id {
            CampaignId::C15 => (self.a[0] < (1.0 - k) / 2.0).then(|| format!("Re(a) >= (1-k)/2 = {}", (1.0 - k) / 2.0)),
            CampaignId::C20 | CampaignId::E345 => {
                if self.a[0] < -k / 2.0 {
                    Some(format!("Re(a) >= -k/2 = {}", -k / 2.0))
                } else {
                    self.contains_a(0.0).then(|| "a != 0".to_string())
                }
            }
            CampaignId::C21 => [0.0, 1.0, -2.0]
                .into_iter()
                .find(|&v| self.contains_a(v))
                .map(|v| format!("a != {v}")),
            CampaignId::C16 | CampaignId::C9 | CampaignId::C10 | CampaignId::C10a => {
                self.contains_a(0.0).then(|| "a != 0".to_string())
            }
            CampaignId::C16Example | CampaignId::CosExample => None,
        };
        if let Some(h) = hypothesis {
            return Err(Error::Config(format!(
                "a range [{}, {}] violates the {id} hypothesis {h}",
                self.a[0], self.a[1]
            )));
        }
        for &j in id.shifts() {
            let (lo, hi) = (self.a[0] + j as f64, self.a[1] + j as f64);
            let top = (hi + POLE_RADIUS).floor().min(0.0);
            if top >= lo - POLE_RADIUS {
                return Err(Error::Config(format!(
                    "a range [{}, {}] puts a{j:+} on the pole {top}",
                    self.a[0], self.a[1]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub id: CampaignId,
    pub trials: usize,
    pub grid: DiskGrid,
    pub param_box: ParamBox,
    pub seed: u64,
    pub order: usize,
    pub budget: f64,
    pub decay: f64,
    /// Use `f(z) = z` in every trial.
    pub identity_f: bool,
}

impl CampaignConfig {
    pub fn new(id: CampaignId) -> Self {
        CampaignConfig {
            id,
            trials: 500,
            grid: DiskGrid::default(),
            param_box: ParamBox::default_for(id),
            seed: 0,
            order: CAMPAIGN_ORDER,
            budget: 1.0,
            decay: 0.5,
            identity_f: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("a campaign needs at least one trial".into()));
        }
        if self.order < 8 {
            return Err(Error::Config(format!("order {} is below 8", self.order)));
        }
        if self.grid.outer_radius() > DEFAULT_R_CERT {
            return Err(Error::Domain(format!(
                "grid radius {} exceeds the certified radius {DEFAULT_R_CERT}",
                self.grid.outer_radius()
            )));
        }
        if !(self.budget >= 0.0 && self.budget.is_finite() && self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::Config(format!("budget {} / decay {} out of range", self.budget, self.decay)));
        }
        self.param_box.validate(self.id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialVerdict {
    HypothesisFailed,
    Holds,
    Inconclusive,
    Counterexample,
}

impl TrialVerdict {
    pub fn name(self) -> &'static str {
        match self {
            TrialVerdict::HypothesisFailed => "hypothesis_failed",
            TrialVerdict::Holds => "holds",
            TrialVerdict::Inconclusive => "inconclusive",
            TrialVerdict::Counterexample => "counterexample",
        }
    }
}

/// One trial. Premise `i` holds when `hyp_sup[i]` is below `hyp_bound[i]`;
/// likewise for the conclusions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub tight: bool,
    pub a: f64,
    pub c: f64,
    pub m: f64,
    pub k: f64,
    pub lambda1: Option<f64>,
    pub hyp_sup: Vec<f64>,
    pub hyp_bound: Vec<f64>,
    pub concl_sup: Vec<f64>,
    pub concl_bound: Vec<f64>,
    pub verdict: TrialVerdict,
    pub margin: Option<f64>,
    #[serde(with = "complex_pair::option")]
    pub witness: Option<Complex64>,
    pub witness_value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub seed: u64,
    pub a: f64,
    pub c: f64,
    pub m: f64,
    pub k: f64,
    pub lambda1: Option<f64>,
    #[serde(with = "complex_pair")]
    pub witness: Complex64,
    pub value: f64,
    pub bound: f64,
}

/// `conclusion_holds` counts every hit without a certified violation;
/// `inconclusive` is the part of it that sits inside the tolerance band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub campaign_id: CampaignId,
    pub trials: usize,
    pub hypothesis_hits: usize,
    pub conclusion_holds: usize,
    pub inconclusive: usize,
    pub counterexamples: Vec<Counterexample>,
    pub min_margin: Option<f64>,
    pub rows: Vec<TrialRecord>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial: u64,
    seed: u64,
    tight: bool,
    a: f64,
    c: f64,
    m: f64,
    k: f64,
    lambda1: Option<f64>,
    hyp_sup: String,
    concl_sup: String,
    verdict: &'a str,
    margin: Option<f64>,
}

fn joined(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

impl CampaignResult {
    fn from_rows(id: CampaignId, rows: Vec<TrialRecord>) -> Self {
        let hits = rows.iter().filter(|r| r.verdict != TrialVerdict::HypothesisFailed).count();
        let inconclusive = rows.iter().filter(|r| r.verdict == TrialVerdict::Inconclusive).count();
        let counterexamples: Vec<Counterexample> = rows
            .iter()
            .filter(|r| r.verdict == TrialVerdict::Counterexample)
            .map(|r| Counterexample {
                trial: r.trial,
                seed: r.seed,
                a: r.a,
                c: r.c,
                m: r.m,
                k: r.k,
                lambda1: r.lambda1,
                witness: r.witness.expect("counterexample rows carry a witness"),
                value: r.witness_value.expect("counterexample rows carry a value"),
                bound: r.concl_bound.first().copied().unwrap_or(0.0),
            })
            .collect();
        let min_margin = rows.iter().filter_map(|r| r.margin).reduce(f64::min);
        CampaignResult {
            campaign_id: id,
            trials: rows.len(),
            hypothesis_hits: hits,
            conclusion_holds: hits - counterexamples.len(),
            inconclusive,
            counterexamples,
            min_margin,
            rows,
        }
    }

    /// One row per trial; premise and conclusion values joined with `;`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRow {
                trial: r.trial,
                seed: r.seed,
                tight: r.tight,
                a: r.a,
                c: r.c,
                m: r.m,
                k: r.k,
                lambda1: r.lambda1,
                hyp_sup: joined(&r.hyp_sup),
                concl_sup: joined(&r.concl_sup),
                verdict: r.verdict.name(),
                margin: r.margin,
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    config.validate()?;
    if config.id.is_example() {
        return run_example(config);
    }
    let rows = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| trial(config, i, trial_seed(config.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CampaignResult::from_rows(config.id, rows))
}

/// Reruns the trial whose seed is recorded in a counterexample.
pub fn replay_trial(config: &CampaignConfig, seed: u64) -> Result<TrialRecord> {
    config.validate()?;
    if config.id.is_example() {
        return Err(Error::Config(format!("{} has no random trials to replay", config.id)));
    }
    trial(config, 0, seed)
}

fn draw(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> f64 {
    rng.random_range(lo..=hi)
}

fn trial(config: &CampaignConfig, index: u64, seed: u64) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = &config.param_box;
    let a = draw(&mut rng, bx.a);
    let c = draw(&mut rng, bx.c);
    let tight: bool = rng.random();
    let f_seed: u64 = rng.random();
    let f = if config.identity_f {
        NormalizedFunction::identity(config.order)
    } else {
        random_function_of_order(config.budget, config.decay, f_seed, config.order)?
    };
    let base = TrialRecord {
        trial: index,
        seed,
        tight,
        a,
        c,
        m: 0.0,
        k: bx.k,
        lambda1: None,
        hyp_sup: Vec::new(),
        hyp_bound: Vec::new(),
        concl_sup: Vec::new(),
        concl_bound: Vec::new(),
        verdict: TrialVerdict::HypothesisFailed,
        margin: None,
        witness: None,
        witness_value: None,
    };
    if config.id.is_sandwich() {
        sandwich_trial(config, &mut rng, base, &f)
    } else {
        corollary_trial(config, &mut rng, base, &f)
    }
}

fn operators(config: &CampaignConfig, a: f64, c: f64, f: &NormalizedFunction) -> Result<Vec<TaylorSeries>> {
    let c = Complex64::new(c, 0.0);
    config
        .id
        .shifts()
        .iter()
        .map(|&j| {
            let aj = Complex64::new(a + j as f64, 0.0);
            if config.id == CampaignId::E345 {
                u_series(aj, c, config.order)
            } else {
                apply_operator(aj, c, f)
            }
        })
        .collect()
}

/// `|g - center| < κM` (or `<=`) on the closed disk.
struct Premise {
    g: TaylorSeries,
    center: Complex64,
    kappa: f64,
    strict: bool,
}

/// Upper bound for `max |g - center|` over the closed disk of the outer radius.
fn certified_sup(g: &TaylorSeries, center: Complex64, grid: &DiskGrid) -> f64 {
    let (r, n) = (grid.outer_radius(), grid.angular_count());
    let h = g.shift_constant(-center);
    let (raw, _) = h.raw_max_on_circle(r, n);
    // every point of the circle is within π/n of a sample in angle
    raw + h.tail_at(r) + PI / n as f64 * h.radial_derivative_bound(r)
}

/// Outcome of one strict conclusion `value < bound` on the grid.
struct Scan {
    upper: f64,
    lower: f64,
    witness: Complex64,
}

impl Scan {
    fn verdict(&self, bound: f64) -> TrialVerdict {
        if self.upper + EPS_STRICT < bound {
            TrialVerdict::Holds
        } else if self.lower > bound + EPS_STRICT {
            TrialVerdict::Counterexample
        } else {
            TrialVerdict::Inconclusive
        }
    }
}

/// `|g - center|` over every grid point, with the tail on both sides.
fn scan_disk(g: &TaylorSeries, center: Complex64, grid: &DiskGrid) -> Scan {
    scan_points(g, grid, |w| (w - center).norm(), 0.0)
}

/// Largest `excess(g(z))` over the grid, widened by the tail and `slack`.
fn scan_points(g: &TaylorSeries, grid: &DiskGrid, excess: impl Fn(Complex64) -> f64, slack: f64) -> Scan {
    let mut scan = Scan { upper: f64::NEG_INFINITY, lower: f64::NEG_INFINITY, witness: Complex64::new(0.0, 0.0) };
    for &r in grid.radii() {
        let tail = g.tail_at(r) + slack;
        for z in DiskGrid::circle(r, grid.angular_count()) {
            let e = excess(g.horner(z));
            scan.upper = scan.upper.max(e + tail);
            if e - tail > scan.lower {
                scan.lower = e - tail;
                scan.witness = z;
            }
        }
    }
    scan
}

fn corollary_trial(
    config: &CampaignConfig,
    rng: &mut ChaCha8Rng,
    mut rec: TrialRecord,
    f: &NormalizedFunction,
) -> Result<TrialRecord> {
    let (a, k) = (rec.a, rec.k);
    let ops = operators(config, a, rec.c, f)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let over_z = |s: &TaylorSeries| s.div_by_z_power(1);
    let (premises, conclusion, center) = match config.id {
        CampaignId::C15 => (vec![Premise { g: ops[0].clone(), center: zero, kappa: 1.0, strict: false }], ops[1].clone(), zero),
        CampaignId::C16 => (
            vec![
                Premise { g: ops[0].clone(), center: zero, kappa: k, strict: false },
                Premise { g: ops[0].sub(&ops[1]), center: zero, kappa: 1.0 / a.abs(), strict: true },
            ],
            ops[1].clone(),
            zero,
        ),
        CampaignId::C20 => {
            let s0 = over_z(&ops[0])?;
            (
                vec![
                    Premise { g: s0.clone(), center: zero, kappa: k, strict: false },
                    Premise { g: s0, center: one, kappa: 1.0, strict: true },
                ],
                over_z(&ops[1])?,
                one,
            )
        }
        CampaignId::C21 => {
            let (sm, s0) = (over_z(&ops[0])?, over_z(&ops[1])?);
            (
                vec![
                    Premise { g: s0.clone(), center: zero, kappa: k, strict: false },
                    Premise { g: sm.sub(&s0), center: zero, kappa: (2.0 * (a + 2.0) / (a * (a - 1.0))).abs(), strict: true },
                ],
                over_z(&ops[2])?,
                one,
            )
        }
        CampaignId::E345 => (
            vec![Premise { g: over_z(&ops[0])?, center: one, kappa: 1.0, strict: true }],
            over_z(&ops[1])?,
            one,
        ),
        other => unreachable!("{other} is not a single-bound corollary"),
    };

    let uppers: Vec<f64> = premises.iter().map(|p| certified_sup(&p.g, p.center, &config.grid)).collect();
    let spread: f64 = rng.random();
    let [m_lo, m_hi] = config.param_box.m;
    let m = if rec.tight {
        let m_min = premises
            .iter()
            .zip(&uppers)
            .map(|(p, u)| (u + if p.strict { 2.0 * EPS_STRICT } else { 0.0 }) / p.kappa)
            .fold(0.0, f64::max);
        (m_min * (1.0 + TIGHT_SPREAD * spread)).clamp(m_lo, m_hi)
    } else {
        m_lo + (m_hi - m_lo) * spread
    };
    rec.m = m;
    rec.hyp_sup = uppers.clone();
    rec.hyp_bound = premises.iter().map(|p| p.kappa * m).collect();
    let hyp = premises.iter().zip(&uppers).all(|(p, &u)| {
        let bound = p.kappa * m;
        if p.strict {
            u + EPS_STRICT < bound
        } else {
            u <= bound
        }
    });
    let scan = scan_disk(&conclusion, center, &config.grid);
    rec.concl_sup = vec![scan.upper];
    rec.concl_bound = vec![m];
    if hyp {
        rec.verdict = scan.verdict(m);
        rec.margin = Some(m - scan.upper);
        if rec.verdict == TrialVerdict::Counterexample {
            rec.witness = Some(scan.witness);
            rec.witness_value = Some((conclusion.horner(scan.witness) - center).norm());
        }
    }
    Ok(rec)
}

/// Range of a sandwich majorant `q_i`, with `min |q_i'|` on the unit circle.
struct SandwichQ {
    region: Region,
    dq_min: f64,
    /// Boundary samples of `q_i(U)` and the distance within which every
    /// boundary point lies from one of them.
    boundary: Vec<Complex64>,
    spacing: f64,
}

fn disk_q(center: Complex64, radius: f64, n: usize) -> SandwichQ {
    SandwichQ {
        region: Region::Disk { center, radius },
        dq_min: radius,
        boundary: (0..n).map(|j| center + radius * unit_point(j, n)).collect(),
        spacing: radius * PI / n as f64,
    }
}

/// Coefficients of the dominant for the ratio chain with `h(z) = 1 + λz`:
/// `(n + a) q_n = (a-1) λ q_{n-1} - a Σ_{j=1}^{n-1} q_j q_{n-j}`, `q_0 = 1`.
pub fn ratio_dominant(a: f64, lambda: f64, order: usize) -> Vec<f64> {
    let mut q = vec![1.0];
    for n in 1..=order {
        let conv: f64 = (1..n).map(|j| q[j] * q[n - j]).sum();
        q.push(((a - 1.0) * lambda * q[n - 1] - a * conv) / (n as f64 + a));
    }
    q
}

fn ratio_q(a: f64, lambda: f64, order: usize, n: usize) -> SandwichQ {
    let coeffs = ratio_dominant(a, lambda, order);
    let series = TaylorSeries::from_real(&coeffs).with_r_cert(1.0);
    let dq = series.differentiate();
    let boundary: Vec<Complex64> = (0..n).map(|j| series.horner(unit_point(j, n))).collect();
    let dq_abs: Vec<f64> = (0..n).map(|j| dq.horner(unit_point(j, n)).norm()).collect();
    let dq_max = dq_abs.iter().copied().fold(0.0, f64::max);
    // heuristic truncation allowance from the last two coefficients
    let tail = 10.0 * (coeffs[order - 1].abs() + coeffs[order].abs());
    let curvature: f64 = coeffs.iter().enumerate().map(|(k, c)| (k * k) as f64 * c.abs()).sum();
    let step = 2.0 * PI / n as f64;
    SandwichQ {
        region: Region::Curve { curve: boundary.clone(), slack: tail + step * step / 8.0 * curvature },
        dq_min: dq_abs.iter().copied().fold(f64::INFINITY, f64::min) - tail,
        boundary,
        spacing: dq_max * step / 2.0 + tail,
    }
}

fn sandwich_trial(
    config: &CampaignConfig,
    rng: &mut ChaCha8Rng,
    mut rec: TrialRecord,
    f: &NormalizedFunction,
) -> Result<TrialRecord> {
    let (a, k) = (rec.a, rec.k);
    let grid = &config.grid;
    let (r, n) = (grid.outer_radius(), grid.angular_count());
    let ops = operators(config, a, rec.c, f)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let (phi, p, center) = match config.id {
        CampaignId::C9 => (ops[0].clone(), ops[1].clone(), zero),
        CampaignId::C10 => (ops[0].div_by_z_power(1)?, ops[1].div_by_z_power(1)?, one),
        CampaignId::C10a => {
            let ratio = |num: &TaylorSeries, den: &TaylorSeries| TaylorSeries::series_ratio(num, den, 1);
            match (ratio(&ops[0], &ops[1]), ratio(&ops[1], &ops[2])) {
                (Ok(phi), Ok(p)) => (phi, p, one),
                // ratios without a certified tail cannot meet the premises
                (Err(Error::TailNotCertified(_)), _) | (_, Err(Error::TailNotCertified(_))) => return Ok(rec),
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        other => unreachable!("{other} is not a sandwich corollary"),
    };

    let phi_region = Region::image_of_circle(&phi, r, n);
    let p_region = Region::image_of_circle(&p, r, n);
    let phi_spread = certified_sup(&phi, center, grid);
    let phi_sup = certified_sup(&phi, zero, grid);
    let phi_inradius = phi_region.depth(center) - phi_region.slack();

    let (u1, u2): (f64, f64) = (rng.random(), rng.random());
    let [m_lo, m_hi] = config.param_box.m;
    let (lambda1, lambda2) = if rec.tight {
        (
            phi_inradius.max(0.0) * (1.0 - TIGHT_SPREAD * u1) - 2.0 * EPS_STRICT,
            (phi_spread * (1.0 + TIGHT_SPREAD * u2) + 2.0 * EPS_STRICT).clamp(m_lo, m_hi),
        )
    } else {
        let l2 = m_lo + (m_hi - m_lo) * u2;
        (l2 * u1, l2)
    };
    rec.m = lambda2;
    rec.lambda1 = Some(lambda1);
    if !(lambda1 > 0.0) {
        return Ok(rec);
    }
    let (q1, q2) = match config.id {
        CampaignId::C9 => (disk_q(zero, lambda1, n), disk_q(zero, lambda2, n)),
        CampaignId::C10 => {
            let s = a / (a + 1.0);
            (disk_q(one, s * lambda1, n), disk_q(one, s * lambda2, n))
        }
        _ => (ratio_q(a, lambda1, config.order, n), ratio_q(a, lambda2, config.order, n)),
    };

    rec.hyp_sup = vec![phi_spread, lambda1, phi_sup, phi_sup];
    rec.hyp_bound = vec![lambda2, phi_inradius, k * q2.dq_min, k * q1.dq_min];
    let hyp = phi_spread + EPS_STRICT < lambda2
        && phi_region.is_simple()
        && lambda1 + EPS_STRICT < phi_inradius
        && p_region.is_simple()
        && q1.dq_min > 0.0
        && phi_sup <= k * q2.dq_min
        && phi_sup <= k * q1.dq_min;

    // p ≺ q2: every sample of p lies in q2(U)
    let upper = scan_points(&p, grid, |w| -q2.region.depth(w), q2.region.slack());
    // q1 ≺ p: every boundary point of q1(U) lies in p(D_R)
    let err = p_region.slack() + q1.region.slack() + q1.spacing;
    let mut lower = Scan { upper: f64::NEG_INFINITY, lower: f64::NEG_INFINITY, witness: zero };
    for &w in &q1.boundary {
        let e = -p_region.depth(w);
        lower.upper = lower.upper.max(e + err);
        if e - err > lower.lower {
            lower.lower = e - err;
            lower.witness = w;
        }
    }
    rec.concl_sup = vec![upper.upper, lower.upper];
    rec.concl_bound = vec![0.0, 0.0];
    if hyp {
        let verdicts = [upper.verdict(0.0), lower.verdict(0.0)];
        rec.verdict = if let Some(i) = verdicts.iter().position(|&v| v == TrialVerdict::Counterexample) {
            // the q1 witness is a point of the image plane, not of the disk
            let scan = [&upper, &lower][i];
            rec.witness = Some(scan.witness);
            rec.witness_value = Some(scan.lower);
            TrialVerdict::Counterexample
        } else if verdicts.contains(&TrialVerdict::Inconclusive) {
            TrialVerdict::Inconclusive
        } else {
            TrialVerdict::Holds
        };
        rec.margin = Some(-upper.upper.max(lower.upper));
    }
    Ok(rec)
}

/// Grid maxima `(H, C)` of the premise and conclusion of a worked example,
/// sampled on the outer circle of `grid`.
pub fn example_sups(id: CampaignId, grid: &DiskGrid) -> Result<(f64, f64)> {
    let (premise, conclusion, center) = example_series(id)?;
    let (r, n) = (grid.outer_radius(), grid.angular_count());
    let sup = |g: &TaylorSeries| g.shift_constant(-center).raw_max_on_circle(r, n).0;
    Ok((sup(&premise), sup(&conclusion)))
}

fn example_series(id: CampaignId) -> Result<(TaylorSeries, TaylorSeries, Complex64)> {
    let re = |x: f64| Complex64::new(x, 0.0);
    let order = 2 * CAMPAIGN_ORDER;
    match id {
        CampaignId::C16Example => {
            // √z sinh√z - 2(cosh√z - 1) and 2(cosh√z - 1)
            let u1 = u_series(re(1.0), re(-1.0), order)?;
            let u2 = u_series(re(2.0), re(-1.0), order)?;
            Ok((u1.sub(&u2), u2, re(0.0)))
        }
        CampaignId::CosExample => {
            // sin√z/√z - 1 and 2(1 - cos√z)/z - 1
            let u1 = u_series(re(1.0), re(1.0), order)?.div_by_z_power(1)?;
            let u2 = u_series(re(2.0), re(1.0), order)?.div_by_z_power(1)?;
            Ok((u1, u2, re(1.0)))
        }
        other => Err(Error::Config(format!("{other} is not a worked example"))),
    }
}

fn run_example(config: &CampaignConfig) -> Result<CampaignResult> {
    let id = config.id;
    let (premise, conclusion, center) = example_series(id)?;
    let (h, cc) = example_sups(id, &config.grid)?;
    let r = config.grid.outer_radius();
    let (tail_h, tail_c) = (premise.tail_at(r), conclusion.tail_at(r));
    let (a, c) = (1.0, if id == CampaignId::C16Example { -1.0 } else { 1.0 });
    let levels = std::iter::once(h + 0.01).chain(EXAMPLE_LEVELS);
    let rows = levels
        .enumerate()
        .map(|(i, m)| {
            let scan = Scan {
                upper: cc + tail_c,
                lower: cc - tail_c,
                witness: conclusion.shift_constant(-center).raw_max_on_circle(r, config.grid.angular_count()).1,
            };
            let hyp = h + tail_h + EPS_STRICT < m;
            let verdict = if hyp { scan.verdict(m) } else { TrialVerdict::HypothesisFailed };
            let counter = verdict == TrialVerdict::Counterexample;
            TrialRecord {
                trial: i as u64,
                seed: config.seed,
                tight: false,
                a,
                c,
                m,
                k: config.param_box.k,
                lambda1: None,
                hyp_sup: vec![h],
                hyp_bound: vec![m],
                concl_sup: vec![cc],
                concl_bound: vec![m],
                verdict,
                margin: hyp.then_some(m - scan.upper),
                witness: counter.then_some(scan.witness),
                witness_value: counter.then_some(cc),
            }
        })
        .collect();
    Ok(CampaignResult::from_rows(id, rows))
}
