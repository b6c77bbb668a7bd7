//! Coefficient majorants backing the certified tail of a [`TaylorSeries`].
//!
//! A majorant bounds `|c_n|` for every index past the truncation order. The
//! first few indices may carry explicit bounds; beyond them a geometric
//! envelope `exp(ln_scale) * n^power * rho^n` takes over.
//!
//! [`TaylorSeries`]: super::TaylorSeries

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub ln_scale: f64,
    pub power: f64,
    pub ln_rho: f64,
}

impl Envelope {
    pub fn ln_at(&self, n: usize) -> f64 {
        let poly = if self.power == 0.0 { 0.0 } else { self.power * (n as f64).ln() };
        self.ln_scale + poly + n as f64 * self.ln_rho
    }

    pub fn at(&self, n: usize) -> f64 {
        self.ln_at(n).exp()
    }

    fn scaled(self, ln_factor: f64) -> Self {
        Envelope { ln_scale: self.ln_scale + ln_factor, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMajorant {
    /// First coefficient index covered.
    pub start: usize,
    /// Bounds for indices `start..start + explicit.len()`.
    pub explicit: Vec<f64>,
    /// Bound for every later index; `None` means those coefficients vanish.
    pub envelope: Option<Envelope>,
}

impl TailMajorant {
    pub fn zero(start: usize) -> Self {
        TailMajorant { start, explicit: Vec::new(), envelope: None }
    }

    pub fn geometric(start: usize, envelope: Envelope) -> Self {
        TailMajorant { start, explicit: Vec::new(), envelope: Some(envelope) }.normalized()
    }

    /// Cauchy estimate `|c_n| <= bound / radius^n`.
    pub fn cauchy(start: usize, bound: f64, radius: f64) -> Self {
        Self::geometric(
            start,
            Envelope { ln_scale: bound.ln(), power: 0.0, ln_rho: -radius.ln() },
        )
    }

    /// First index handled by the envelope.
    pub fn envelope_start(&self) -> usize {
        self.start + self.explicit.len()
    }

    pub fn bound_at(&self, n: usize) -> f64 {
        debug_assert!(n >= self.start);
        let k = n - self.start;
        if k < self.explicit.len() {
            self.explicit[k]
        } else {
            self.envelope.map_or(0.0, |e| e.at(n))
        }
    }

    /// `Σ_{n >= start} bound_at(n) r^n`, or infinity when the envelope
    /// does not converge at `r`.
    pub fn tail(&self, r: f64) -> f64 {
        let mut sum: f64 = self
            .explicit
            .iter()
            .enumerate()
            .map(|(i, b)| b * r.powi((self.start + i) as i32))
            .sum();
        let Some(env) = self.envelope else { return sum };
        if env.ln_scale == f64::NEG_INFINITY {
            return sum;
        }
        let x = env.ln_rho + r.ln();
        if x >= 0.0 {
            return f64::INFINITY;
        }
        let mut n = self.envelope_start();
        loop {
            let term = (env.ln_at(n) + n as f64 * r.ln()).exp();
            let ratio = ((n as f64 + 1.0) / n as f64).powf(env.power) * x.exp();
            if ratio <= 0.9 || n > self.envelope_start() + 100_000 {
                if ratio >= 1.0 {
                    return f64::INFINITY;
                }
                sum += term / (1.0 - ratio);
                return sum;
            }
            sum += term;
            n += 1;
        }
    }

    /// Moves explicit bounds in front of the envelope so it never starts at 0.
    fn normalized(mut self) -> Self {
        if self.envelope_start() == 0 {
            let b0 = self.bound_at(0);
            self.explicit.push(b0);
        }
        self
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let ln_f = factor.ln();
        TailMajorant {
            start: self.start,
            explicit: self.explicit.iter().map(|b| b * factor).collect(),
            envelope: self.envelope.map(|e| e.scaled(ln_f)),
        }
    }

    /// Majorant of `n c_n`.
    pub fn times_index(&self) -> Self {
        TailMajorant {
            start: self.start,
            explicit: self
                .explicit
                .iter()
                .enumerate()
                .map(|(i, b)| b * (self.start + i) as f64)
                .collect(),
            envelope: self.envelope.map(|e| Envelope { power: e.power + 1.0, ..e }),
        }
    }

    /// Majorant of `(n+1) c_{n+1}`; requires `start >= 2`.
    pub fn derivative(&self) -> Self {
        let m0 = self.envelope_start() - 1;
        debug_assert!(m0 >= 1);
        TailMajorant {
            start: self.start - 1,
            explicit: self
                .explicit
                .iter()
                .enumerate()
                .map(|(i, b)| b * (self.start + i) as f64)
                .collect(),
            envelope: self.envelope.map(|e| {
                let bump = (e.power + 1.0) * ((m0 as f64 + 1.0) / m0 as f64).ln();
                Envelope { ln_scale: e.ln_scale + e.ln_rho + bump, power: e.power + 1.0, ln_rho: e.ln_rho }
            }),
        }
    }

    /// Majorant of `c_{n+v}`; requires `start > v`.
    pub fn shifted_down(&self, v: usize) -> Self {
        let m0 = self.envelope_start() - v;
        debug_assert!(m0 >= 1);
        TailMajorant {
            start: self.start - v,
            explicit: self.explicit.clone(),
            envelope: self.envelope.map(|e| {
                let bump = e.power * ((m0 + v) as f64 / m0 as f64).ln();
                Envelope { ln_scale: e.ln_scale + v as f64 * e.ln_rho + bump, ..e }
            }),
        }
    }
}

/// Envelope dominating `a + b` for all `n >= n0`.
pub fn envelope_sum(a: Option<Envelope>, b: Option<Envelope>, n0: usize) -> Option<Envelope> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let power = a.power.max(b.power);
            let ln_rho = a.ln_rho.max(b.ln_rho);
            let n0 = n0.max(1) as f64;
            let part = |e: Envelope| {
                e.ln_scale + (e.power - power) * n0.ln() + n0 * (e.ln_rho - ln_rho)
            };
            let (pa, pb) = (part(a), part(b));
            let hi = pa.max(pb);
            let ln_scale = if hi == f64::NEG_INFINITY {
                hi
            } else {
                hi + ((pa - hi).exp() + (pb - hi).exp()).ln()
            };
            Some(Envelope { ln_scale, power, ln_rho })
        }
    }
}

/// Envelope dominating `a * b`.
pub fn envelope_product(a: Option<Envelope>, b: Option<Envelope>) -> Option<Envelope> {
    match (a, b) {
        (Some(a), Some(b)) => Some(Envelope {
            ln_scale: a.ln_scale + b.ln_scale,
            power: a.power + b.power,
            ln_rho: a.ln_rho + b.ln_rho,
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_matches_closed_form() {
        // |c_n| <= 0.5^n for n >= 10, tail at r = 0.9 is (0.45)^10 / 0.55
        let m = TailMajorant::geometric(
            10,
            Envelope { ln_scale: 0.0, power: 0.0, ln_rho: 0.5f64.ln() },
        );
        let want = 0.45f64.powi(10) / 0.55;
        assert!((m.tail(0.9) - want).abs() < 1e-15);
        assert_eq!(m.tail(2.5), f64::INFINITY);
    }

    #[test]
    fn power_tail_is_an_upper_bound() {
        let env = Envelope { ln_scale: 0.0, power: 3.0, ln_rho: 0.6f64.ln() };
        let m = TailMajorant::geometric(4, env);
        let direct: f64 = (4..4000).map(|n| env.at(n) * 0.99f64.powi(n as i32)).sum();
        let t = m.tail(0.99);
        assert!(t >= direct && t < direct * 1.5, "{t} vs {direct}");
    }

    #[test]
    fn sum_dominates_parts() {
        let a = Envelope { ln_scale: 0.3, power: 1.0, ln_rho: 0.4f64.ln() };
        let b = Envelope { ln_scale: -1.0, power: 0.0, ln_rho: 0.7f64.ln() };
        let s = envelope_sum(Some(a), Some(b), 5).unwrap();
        for n in 5..200 {
            assert!(s.at(n) >= (a.at(n) + b.at(n)) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn derivative_dominates() {
        let env = Envelope { ln_scale: 0.0, power: 0.0, ln_rho: 0.5f64.ln() };
        let m = TailMajorant::geometric(3, env);
        let d = m.derivative();
        for n in 2..100 {
            assert!(d.bound_at(n) >= (n + 1) as f64 * env.at(n + 1) * (1.0 - 1e-12));
        }
    }
}
