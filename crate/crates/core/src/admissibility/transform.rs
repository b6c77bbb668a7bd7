//! The three jet-to-tuple changes of variables and their inverses.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{check_pole, complex_pair, ensure_finite, TaylorSeries};
use crate::{Error, Result};

/// Guard for denominators built from probe data.
pub const DENOM_GUARD: f64 = 1e-10;

/// `(p, z p', z² p'', z³ p''')` at a point `z` of the disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetPoint {
    #[serde(with = "complex_pair")]
    pub r: Complex64,
    #[serde(with = "complex_pair")]
    pub s: Complex64,
    #[serde(with = "complex_pair")]
    pub t: Complex64,
    #[serde(with = "complex_pair")]
    pub u: Complex64,
    #[serde(with = "complex_pair")]
    pub z: Complex64,
}

impl JetPoint {
    pub fn new(r: Complex64, s: Complex64, t: Complex64, u: Complex64, z: Complex64) -> Result<Self> {
        if z.norm() >= 1.0 {
            return Err(Error::Domain(format!("jet point |z| = {} is not inside the disk", z.norm())));
        }
        for (v, name) in [(r, "r"), (s, "s"), (t, "t"), (u, "u"), (z, "z")] {
            ensure_finite(v, name)?;
        }
        Ok(JetPoint { r, s, t, u, z })
    }

    /// Jet of a series at `z`.
    pub fn of_series(p: &TaylorSeries, z: Complex64) -> Result<Self> {
        if z.norm() > p.r_cert() {
            return Err(Error::Domain(format!("|z| = {} exceeds r_cert {}", z.norm(), p.r_cert())));
        }
        let [r, s, t, u] = p.jet(z).euler(z);
        Self::new(r, s, t, u, z)
    }

    pub fn values(&self) -> [Complex64; 4] {
        [self.r, self.s, self.t, self.u]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreekTuple {
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    #[serde(with = "complex_pair")]
    pub beta: Complex64,
    #[serde(with = "complex_pair")]
    pub gamma: Complex64,
    #[serde(with = "complex_pair")]
    pub delta: Complex64,
}

impl GreekTuple {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        for (v, name) in [(alpha, "alpha"), (beta, "beta"), (gamma, "gamma"), (delta, "delta")] {
            ensure_finite(v, name)?;
        }
        Ok(GreekTuple { alpha, beta, gamma, delta })
    }

    pub fn values(&self) -> [Complex64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn max_gap(&self, other: &GreekTuple) -> f64 {
        self.values().iter().zip(other.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    /// `p = S_{a+1} f`.
    Direct,
    /// `p = S_{a+1} f / z`.
    Normalized,
    /// `p = S_a f / S_{a+1} f`.
    Ratio,
}

impl TransformKind {
    /// Number of downward shifts `a - 1, a - 2, ...` that must avoid poles.
    fn shifts(self) -> usize {
        match self {
            TransformKind::Direct | TransformKind::Normalized => 3,
            TransformKind::Ratio => 4,
        }
    }
}

fn check_shifts(a: Complex64, kind: TransformKind) -> Result<()> {
    ensure_finite(a, "parameter a")?;
    for j in 0..kind.shifts() {
        check_pole(&format!("a - {j}"), a - j as f64)?;
    }
    Ok(())
}

fn guard(v: Complex64, what: &str) -> Result<Complex64> {
    if v.norm() <= DENOM_GUARD {
        Err(Error::Degenerate(format!("{what} = {v} is below {DENOM_GUARD:e}")))
    } else {
        Ok(v)
    }
}

pub fn transform_direct(jet: &JetPoint, a: Complex64) -> Result<GreekTuple> {
    transform_values(TransformKind::Direct, jet.values(), a)
}

pub fn transform_normalized(jet: &JetPoint, a: Complex64) -> Result<GreekTuple> {
    transform_values(TransformKind::Normalized, jet.values(), a)
}

pub fn transform_ratio(jet: &JetPoint, a: Complex64) -> Result<GreekTuple> {
    transform_values(TransformKind::Ratio, jet.values(), a)
}

pub fn transform(kind: TransformKind, jet: &JetPoint, a: Complex64) -> Result<GreekTuple> {
    transform_values(kind, jet.values(), a)
}

/// The change of variables on raw `[r, s, t, u]`.
pub fn transform_values(kind: TransformKind, jet: [Complex64; 4], a: Complex64) -> Result<GreekTuple> {
    check_shifts(a, kind)?;
    match kind {
        TransformKind::Direct => direct(jet, a),
        TransformKind::Normalized => normalized(jet, a),
        TransformKind::Ratio => ratio(jet, a),
    }
}

fn direct([r, s, t, u]: [Complex64; 4], a: Complex64) -> Result<GreekTuple> {
    let (a1, a2, a3) = (a - 1.0, a - 2.0, a - 3.0);
    GreekTuple::new(
        r,
        (s + a1 * r) / a,
        (t + 2.0 * a1 * s + a2 * a1 * r) / (a * a1),
        (u + 3.0 * a1 * t + 3.0 * a1 * a2 * s + a1 * a2 * a3 * r) / (a * a1 * a2),
    )
}

fn normalized([r, s, t, u]: [Complex64; 4], a: Complex64) -> Result<GreekTuple> {
    let (a1, a2) = (a - 1.0, a - 2.0);
    GreekTuple::new(
        r,
        (s + a * r) / a,
        (t + 2.0 * a * s + a * a1 * r) / (a * a1),
        (u + 3.0 * a * t + 3.0 * a * a1 * s + a * a1 * a2 * r) / (a * a1 * a2),
    )
}

/// Helper quantities of the ratio chain, all divided through by `r`.
struct RatioParts {
    e: Complex64,
    f: Complex64,
    g: Complex64,
    h: Complex64,
}

fn ratio_parts([r, s, t, u]: [Complex64; 4], a: Complex64) -> Result<RatioParts> {
    let r = guard(r, "r")?;
    let x = s / r;
    let e = guard(x + a * r - 1.0, "E")?;
    let g = t / r + x - x * x + a * s;
    let f = guard(e - 1.0 + g / e, "F")?;
    let h = 3.0 * t / r + x - 3.0 * x * x + u / r - 3.0 * s * t / (r * r) + 2.0 * x * x * x + a * s + a * t;
    Ok(RatioParts { e, f, g, h })
}

fn ratio(jet: [Complex64; 4], a: Complex64) -> Result<GreekTuple> {
    let RatioParts { e, f, g, h } = ratio_parts(jet, a)?;
    GreekTuple::new(
        jet[0],
        e / (a - 1.0),
        f / (a - 2.0),
        (f - 1.0 + (g + h / e - g * g / (e * e)) / f) / (a - 3.0),
    )
}

/// Recovers `(r, s, t, u)` from a tuple; `transform(kind, inverse(kind, g)) = g`.
pub fn inverse_transform(kind: TransformKind, tuple: &GreekTuple, a: Complex64) -> Result<[Complex64; 4]> {
    check_shifts(a, kind)?;
    let GreekTuple { alpha, beta, gamma, delta } = *tuple;
    let (a1, a2, a3) = (a - 1.0, a - 2.0, a - 3.0);
    let r = alpha;
    let out = match kind {
        TransformKind::Direct => {
            let s = a * beta - a1 * r;
            let t = a * a1 * gamma - 2.0 * a1 * s - a2 * a1 * r;
            let u = a * a1 * a2 * delta - 3.0 * a1 * t - 3.0 * a1 * a2 * s - a1 * a2 * a3 * r;
            [r, s, t, u]
        }
        TransformKind::Normalized => {
            let s = a * beta - a * r;
            let t = a * a1 * gamma - 2.0 * a * s - a * a1 * r;
            let u = a * a1 * a2 * delta - 3.0 * a * t - 3.0 * a * a1 * s - a * a1 * a2 * r;
            [r, s, t, u]
        }
        TransformKind::Ratio => {
            let r = guard(r, "alpha")?;
            let e = guard(a1 * beta, "E")?;
            let f = guard(a2 * gamma, "F")?;
            let s = r * (e - a * r + 1.0);
            let x = s / r;
            let g = e * (f - e + 1.0);
            let t = r * (g - x + x * x - a * s);
            let big_x = f * (a3 * delta - f + 1.0);
            let h = e * (big_x - g) + g * g / e;
            let u = r
                * (h - 3.0 * t / r - x + 3.0 * x * x + 3.0 * s * t / (r * r) - 2.0 * x * x * x - a * s - a * t);
            [r, s, t, u]
        }
    };
    for (v, name) in out.iter().zip(["r", "s", "t", "u"]) {
        ensure_finite(*v, name)?;
    }
    Ok(out)
}

/// `ψ = φ ∘ transform_kind`.
pub fn psi_from_phi<F>(phi: F, kind: TransformKind, a: Complex64) -> impl Fn(&JetPoint) -> Result<Complex64>
where
    F: Fn(&GreekTuple, Complex64) -> Complex64,
{
    move |jet| {
        let tuple = transform(kind, jet, a)?;
        ensure_finite(phi(&tuple, jet.z), "psi")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn jet(r: f64, s: f64, t: f64, u: f64) -> JetPoint {
        JetPoint::new(c(r), c(s), c(t), c(u), c(0.2)).unwrap()
    }

    #[test]
    fn direct_examples() {
        let z = Complex64::new(0.3, -0.4);
        let id = JetPoint::new(z, z, c(0.0), c(0.0), z).unwrap();
        let g = transform_direct(&id, Complex64::new(4.2, 0.7)).unwrap();
        for v in g.values() {
            assert!((v - z).norm() < 1e-15);
        }
        let g = transform_direct(&jet(1.0, 0.0, 0.0, 0.0), c(2.5)).unwrap();
        assert_eq!(g.alpha, c(1.0));
        assert!((g.beta - c(0.6)).norm() < 1e-15);
        assert!((g.delta - c(-0.2)).norm() < 1e-15);
        assert!(matches!(transform_direct(&jet(1.0, 0.0, 0.0, 0.0), c(2.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn normalized_examples() {
        let g = transform_normalized(&jet(1.0, 0.0, 0.0, 0.0), c(3.5)).unwrap();
        for v in g.values() {
            assert!((v - c(1.0)).norm() < 1e-15);
        }
        let g = transform_normalized(&jet(0.0, 1.0, 0.0, 0.0), c(3.0)).unwrap();
        assert!((g.beta - c(1.0 / 3.0)).norm() < 1e-15);
        assert!((g.gamma - c(1.0)).norm() < 1e-15);
        assert!((g.delta - c(3.0)).norm() < 1e-15);
    }

    #[test]
    fn ratio_examples() {
        let g = transform_ratio(&jet(1.0, 0.0, 0.0, 0.0), c(4.5)).unwrap();
        for v in g.values() {
            assert!((v - c(1.0)).norm() < 1e-14, "{g:?}");
        }
        assert!(matches!(transform_ratio(&jet(1e-12, 0.0, 0.0, 0.0), c(4.5)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn inverses_round_trip() {
        let j = JetPoint::new(
            Complex64::new(0.7, 0.2),
            Complex64::new(-0.3, 0.5),
            Complex64::new(0.1, -0.9),
            Complex64::new(1.3, 0.4),
            c(0.5),
        )
        .unwrap();
        let a = Complex64::new(5.3, -0.6);
        for kind in [TransformKind::Direct, TransformKind::Normalized, TransformKind::Ratio] {
            let g = transform(kind, &j, a).unwrap();
            let back = inverse_transform(kind, &g, a).unwrap();
            for (x, y) in back.iter().zip(j.values()) {
                assert!((x - y).norm() < 1e-12, "{kind:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn psi_projection() {
        let z = Complex64::new(0.1, 0.6);
        let id = JetPoint::new(z, z, c(0.0), c(0.0), z).unwrap();
        let psi = psi_from_phi(|g, _| g.beta, TransformKind::Direct, c(3.7));
        assert!((psi(&id).unwrap() - z).norm() < 1e-15);
    }
}
