use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::DiskGrid;
use super::jet::LocalJet;
use super::majorant::{envelope_product, envelope_sum, TailMajorant};
use super::{complex_pair, ensure_finite};
use crate::{Error, Result, DEFAULT_R_CERT};

const LEADING_THRESHOLD: f64 = 1e-12;
const RATIO_RADII: [f64; 6] = [4.0, 3.0, 2.0, 1.5, 1.25, 1.1];
const RATIO_SAMPLES: usize = 2048;

/// Truncated power series `c_0 + c_1 z + ... + c_N z^N` together with a
/// majorant for the discarded coefficients.
///
/// `tail_bound` bounds `|Σ_{n>N} c_n z^n|` plus Horner rounding uniformly on
/// `|z| <= r_cert`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
    r_cert: f64,
    majorant: TailMajorant,
    tail_bound: f64,
}

impl TaylorSeries {
    /// Series whose coefficients past the order are bounded by `majorant`.
    pub fn with_majorant(coeffs: Vec<Complex64>, r_cert: f64, majorant: TailMajorant) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        assert!(r_cert > 0.0 && r_cert <= 1.0, "r_cert {r_cert} outside (0, 1]");
        debug_assert_eq!(majorant.start, coeffs.len());
        let mut s = TaylorSeries { coeffs, r_cert, majorant, tail_bound: 0.0 };
        s.tail_bound = s.computed_tail(r_cert);
        s
    }

    /// Exact polynomial: every coefficient past the order is zero.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        let n = coeffs.len();
        Self::with_majorant(coeffs, DEFAULT_R_CERT, TailMajorant::zero(n))
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `Σ_{n>=0} z^n` truncated at `order`.
    pub fn geometric(order: usize) -> Self {
        let coeffs = vec![Complex64::new(1.0, 0.0); order + 1];
        Self::with_majorant(
            coeffs,
            DEFAULT_R_CERT,
            TailMajorant::cauchy(order + 1, 1.0, 1.0),
        )
    }

    pub fn with_r_cert(mut self, r_cert: f64) -> Self {
        assert!(r_cert > 0.0 && r_cert <= 1.0, "r_cert {r_cert} outside (0, 1]");
        self.r_cert = r_cert;
        self.tail_bound = self.computed_tail(r_cert);
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn r_cert(&self) -> f64 {
        self.r_cert
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn majorant(&self) -> &TailMajorant {
        &self.majorant
    }

    pub fn is_certified(&self) -> bool {
        self.tail_bound.is_finite()
    }

    /// Error bound for [`evaluate`](Self::evaluate) on `|z| <= r`.
    pub fn tail_at(&self, r: f64) -> f64 {
        let t = self.computed_tail(r);
        if r <= self.r_cert {
            t.min(self.tail_bound)
        } else {
            t
        }
    }

    fn computed_tail(&self, r: f64) -> f64 {
        self.majorant.tail(r) + self.rounding_allowance(r)
    }

    fn rounding_allowance(&self, r: f64) -> f64 {
        let n = self.coeffs.len() as f64;
        let weight: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.powi(k as i32))
            .sum();
        (4.0 * n + 8.0) * f64::EPSILON * weight
    }

    /// Bound on `|c_n|`: the stored value within the order, the majorant beyond.
    pub fn coeff_bound(&self, n: usize) -> f64 {
        if n < self.coeffs.len() {
            self.coeffs[n].norm()
        } else {
            self.majorant.bound_at(n)
        }
    }

    fn first_uncovered(&self) -> usize {
        self.majorant.envelope_start()
    }

    /// Coefficientwise `(k+1) c_{k+1}`, order `N-1`.
    pub fn differentiate(&self) -> TaylorSeries {
        assert!(self.order() >= 1, "differentiate needs order >= 1");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        TaylorSeries::with_majorant(coeffs, self.r_cert, self.majorant.derivative())
    }

    /// Coefficientwise `k c_k`, the series of `z f'(z)`.
    pub fn z_derivative(&self) -> TaylorSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * k as f64)
            .collect();
        TaylorSeries::with_majorant(coeffs, self.r_cert, self.majorant.times_index())
    }

    /// Coefficientwise product; order is the smaller of the two.
    pub fn hadamard(&self, other: &TaylorSeries) -> TaylorSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| self.coeffs[k] * other.coeffs[k]).collect();
        let until = self.first_uncovered().max(other.first_uncovered());
        let explicit = (order + 1..until)
            .map(|n| self.coeff_bound(n) * other.coeff_bound(n))
            .collect();
        let majorant = TailMajorant {
            start: order + 1,
            explicit,
            envelope: envelope_product(self.majorant.envelope, other.majorant.envelope),
        };
        TaylorSeries::with_majorant(coeffs, self.r_cert.min(other.r_cert), majorant)
    }

    /// `self + k * other`; order is the smaller of the two.
    pub fn add_scaled(&self, other: &TaylorSeries, k: Complex64) -> TaylorSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| self.coeffs[n] + k * other.coeffs[n]).collect();
        let until = self.first_uncovered().max(other.first_uncovered());
        let explicit = (order + 1..until)
            .map(|n| self.coeff_bound(n) + k.norm() * other.coeff_bound(n))
            .collect();
        let scaled_other = other.majorant.scaled(k.norm()).envelope;
        let majorant = TailMajorant {
            start: order + 1,
            explicit,
            envelope: envelope_sum(self.majorant.envelope, scaled_other, until),
        };
        TaylorSeries::with_majorant(coeffs, self.r_cert.min(other.r_cert), majorant)
    }

    pub fn sub(&self, other: &TaylorSeries) -> TaylorSeries {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, k: Complex64) -> TaylorSeries {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        TaylorSeries::with_majorant(coeffs, self.r_cert, self.majorant.scaled(k.norm()))
    }

    /// Adds `k` to the constant term.
    pub fn shift_constant(&self, k: Complex64) -> TaylorSeries {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out.tail_bound = out.computed_tail(out.r_cert);
        out
    }

    /// `f / z^v` for `f` with `c_0 = ... = c_{v-1} = 0`.
    pub fn div_by_z_power(&self, v: usize) -> Result<TaylorSeries> {
        if v > self.order() {
            return Err(Error::Degenerate(format!(
                "cannot divide an order-{} series by z^{v}",
                self.order()
            )));
        }
        if let Some(j) = (0..v).find(|&j| self.coeffs[j].norm() > LEADING_THRESHOLD) {
            return Err(Error::Degenerate(format!(
                "coefficient {j} is {} but must vanish to divide by z^{v}",
                self.coeffs[j]
            )));
        }
        Ok(TaylorSeries::with_majorant(
            self.coeffs[v..].to_vec(),
            self.r_cert,
            self.majorant.shifted_down(v),
        ))
    }

    /// Horner evaluation; the true value lies within `tail_bound` of the result.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > self.r_cert * (1.0 + 1e-15) {
            return Err(Error::Domain(format!(
                "|z| = {} exceeds the certified radius {}",
                z.norm(),
                self.r_cert
            )));
        }
        ensure_finite(self.horner(z), "series evaluation")
    }

    /// Horner evaluation of the stored polynomial anywhere in the plane.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and first three derivatives of the stored polynomial at `z`.
    pub fn jet(&self, z: Complex64) -> LocalJet {
        let mut d = [Complex64::new(0.0, 0.0); 4];
        for c in self.coeffs.iter().rev() {
            d[3] = d[3] * z + d[2];
            d[2] = d[2] * z + d[1];
            d[1] = d[1] * z + d[0];
            d[0] = d[0] * z + c;
        }
        // d[k] now holds p^{(k)}(z) / k!
        LocalJet([d[0], d[1], 2.0 * d[2], 6.0 * d[3]])
    }

    /// Maximum of `|f|` over `angular_count` equispaced points of radius `r`,
    /// plus the tail bound at `r`, with the maximizing point.
    pub fn sup_on_circle(&self, r: f64, angular_count: usize) -> Result<(f64, Complex64)> {
        if !(r > 0.0) || r > self.r_cert {
            return Err(Error::Domain(format!(
                "radius {r} outside (0, r_cert = {}]",
                self.r_cert
            )));
        }
        if angular_count < 64 {
            return Err(Error::Config(format!("angular count {angular_count} is below 64")));
        }
        let (raw, witness) = self.raw_max_on_circle(r, angular_count);
        let sup = raw + self.tail_at(r);
        if !sup.is_finite() {
            return Err(Error::TailNotCertified(format!("tail at r = {r} is not finite")));
        }
        Ok((sup, witness))
    }

    /// Sampled maximum of `|f|` without any tail allowance.
    pub fn raw_max_on_circle(&self, r: f64, n: usize) -> (f64, Complex64) {
        DiskGrid::circle(r, n)
            .map(|z| (self.horner(z).norm(), z))
            .fold((f64::NEG_INFINITY, Complex64::new(r, 0.0)), |best, cand| {
                if cand.0 > best.0 {
                    cand
                } else {
                    best
                }
            })
    }

    /// Bound on `r·max|f'|` over `|z| = r`, used to control values between
    /// circle samples.
    pub fn radial_derivative_bound(&self, r: f64) -> f64 {
        let body: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm() * r.powi(k as i32))
            .sum();
        body + self.majorant.times_index().tail(r)
    }

    /// Formal quotient `(f / z^v) / (g / z^v)`.
    ///
    /// The tail is certified with a Cauchy estimate on the largest circle of
    /// radius beyond `r_cert` on which `g / z^v` is shown zero-free.
    pub fn series_ratio(f: &TaylorSeries, g: &TaylorSeries, v: usize) -> Result<TaylorSeries> {
        for (name, s) in [("numerator", f), ("denominator", g)] {
            if s.order() < v || s.coeffs[v].norm() <= LEADING_THRESHOLD {
                return Err(Error::Degenerate(format!(
                    "{name} coefficient {v} is below {LEADING_THRESHOLD:e}"
                )));
            }
        }
        let num = f.div_by_z_power(v)?;
        let den = g.div_by_z_power(v)?;
        let order = num.order().min(den.order());
        let g0 = den.coeffs[0];
        let mut h = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = num.coeffs[n];
            for j in 1..=n {
                acc -= den.coeffs[j] * h[n - j];
            }
            h.push(acc / g0);
        }
        let r_cert = f.r_cert.min(g.r_cert);
        let best = RATIO_RADII
            .iter()
            .filter(|&&radius| radius > r_cert)
            .filter_map(|&radius| quotient_bound(&num, &den, radius).map(|b| (b, radius)))
            .map(|(b, radius)| {
                let m = TailMajorant::cauchy(order + 1, b, radius);
                let t = m.tail(r_cert);
                (t, m)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((t, m)) if t.is_finite() => Ok(TaylorSeries::with_majorant(h, r_cert, m)),
            _ => Err(Error::TailNotCertified(
                "no circle beyond r_cert on which the denominator is certified zero-free".into(),
            )),
        }
    }

    pub fn to_json(&self) -> Result<SeriesJson> {
        if !self.is_certified() {
            return Err(Error::TailNotCertified(format!(
                "order-{} series has no finite tail bound",
                self.order()
            )));
        }
        for c in &self.coeffs {
            ensure_finite(*c, "series coefficient")?;
        }
        Ok(SeriesJson {
            order: self.order(),
            coeffs: self.coeffs.clone(),
            tail_bound: self.tail_bound,
            r_cert: self.r_cert,
            majorant: Some(self.majorant.clone()),
        })
    }

    pub fn from_json(json: SeriesJson) -> Result<TaylorSeries> {
        if json.coeffs.len() != json.order + 1 {
            return Err(Error::Config(format!(
                "order {} needs {} coefficients, found {}",
                json.order,
                json.order + 1,
                json.coeffs.len()
            )));
        }
        if !(json.r_cert > 0.0 && json.r_cert <= 1.0) {
            return Err(Error::Config(format!("r_cert {} outside (0, 1]", json.r_cert)));
        }
        if !(json.tail_bound >= 0.0 && json.tail_bound.is_finite()) {
            return Err(Error::Config(format!("invalid tail bound {}", json.tail_bound)));
        }
        for c in &json.coeffs {
            ensure_finite(*c, "series coefficient")?;
        }
        let start = json.coeffs.len();
        let majorant = match json.majorant {
            Some(m) if m.start == start => m,
            Some(m) => {
                return Err(Error::Config(format!(
                    "majorant starts at {} but the series has {start} coefficients",
                    m.start
                )))
            }
            None => {
                // |c_n| <= max_{|z|=r_cert} |f| / r_cert^n
                let body: f64 = json
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.norm() * json.r_cert.powi(k as i32))
                    .sum();
                TailMajorant::cauchy(start, body + json.tail_bound, json.r_cert)
            }
        };
        let mut s = TaylorSeries::with_majorant(json.coeffs, json.r_cert, majorant);
        s.tail_bound = s.tail_bound.min(json.tail_bound);
        Ok(s)
    }
}

/// Upper bound for `|num / den|` on `|z| = radius`, if `den` is certified
/// zero-free on the closed disk of that radius.
fn quotient_bound(num: &TaylorSeries, den: &TaylorSeries, radius: f64) -> Option<f64> {
    let tail_n = num.majorant.tail(radius);
    let tail_d = den.majorant.tail(radius);
    if !(tail_n.is_finite() && tail_d.is_finite()) {
        return None;
    }
    let step = PI / RATIO_SAMPLES as f64;
    let lip_n = step * num.radial_derivative_bound(radius);
    let lip_d = step * den.radial_derivative_bound(radius);
    let round_n = num.rounding_allowance(radius);
    let round_d = den.rounding_allowance(radius);
    let mut max_n: f64 = 0.0;
    let mut min_d = f64::INFINITY;
    let mut winding = 0.0;
    let mut prev: Option<Complex64> = None;
    let mut first = None;
    for z in DiskGrid::circle(radius, RATIO_SAMPLES) {
        let d = den.horner(z);
        max_n = max_n.max(num.horner(z).norm());
        min_d = min_d.min(d.norm());
        if let Some(p) = prev {
            winding += (d / p).arg();
        } else {
            first = Some(d);
        }
        prev = Some(d);
    }
    if let (Some(p), Some(f)) = (prev, first) {
        winding += (f / p).arg();
    }
    let lower = min_d - lip_d - tail_d - round_d;
    // the sampled curve stays far enough from 0 for the winding count to be exact
    if lower <= 0.0 || (winding / (2.0 * PI)).round() != 0.0 {
        return None;
    }
    Some((max_n + lip_n + tail_n + round_n) / lower)
}

/// Wire format of a series: `{order, coeffs: [[re, im], ...], tail_bound, r_cert}`
/// with an optional majorant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    #[serde(with = "complex_pair::vec")]
    pub coeffs: Vec<Complex64>,
    pub tail_bound: f64,
    pub r_cert: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub majorant: Option<TailMajorant>,
}

/// Member of the normalized class: `c_0 = 0` and `c_1 = 1` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedFunction {
    series: TaylorSeries,
}

impl NormalizedFunction {
    pub fn new(series: TaylorSeries) -> Result<Self> {
        if series.order() < 1
            || series.coeffs[0] != Complex64::new(0.0, 0.0)
            || series.coeffs[1] != Complex64::new(1.0, 0.0)
        {
            return Err(Error::Domain(
                "normalized functions need c_0 = 0 and c_1 = 1 exactly".into(),
            ));
        }
        Ok(NormalizedFunction { series })
    }

    /// `f(z) = z`.
    pub fn identity(order: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); order.max(1) + 1];
        c[1] = Complex64::new(1.0, 0.0);
        NormalizedFunction { series: TaylorSeries::polynomial(c) }
    }

    /// `f(z) = z / (1 - z)`.
    pub fn geometric(order: usize) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0); order.max(1) + 1];
        c[0] = Complex64::new(0.0, 0.0);
        let n = c.len();
        NormalizedFunction {
            series: TaylorSeries::with_majorant(c, DEFAULT_R_CERT, TailMajorant::cauchy(n, 1.0, 1.0)),
        }
    }

    pub fn series(&self) -> &TaylorSeries {
        &self.series
    }

    pub fn into_series(self) -> TaylorSeries {
        self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }
}
