//! Univalent majorants `q` with closed-form derivatives and exact range tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::region::Region;
use crate::analytic::{complex_pair, unit_point};
use crate::{Error, Result};

/// Boundary samples used to certify a polynomial majorant.
const CERT_SAMPLES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MajorantQ {
    /// `q(z) = M z`.
    LinearMz { m: f64 },
    /// `q(z) = 1 + M z`.
    AffineOnePlusMz { m: f64 },
    CertifiedPolynomial(CertifiedPolynomial),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedPolynomial {
    #[serde(with = "complex_pair::vec")]
    coeffs: Vec<Complex64>,
    univalence_margin: f64,
}

impl CertifiedPolynomial {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn univalence_margin(&self) -> f64 {
        self.univalence_margin
    }
}

fn positive(m: f64) -> Result<f64> {
    if m.is_finite() && m > 0.0 {
        Ok(m)
    } else {
        Err(Error::Config(format!("majorant scale M = {m} must be positive")))
    }
}

impl MajorantQ {
    pub fn linear(m: f64) -> Result<Self> {
        Ok(MajorantQ::LinearMz { m: positive(m)? })
    }

    pub fn affine(m: f64) -> Result<Self> {
        Ok(MajorantQ::AffineOnePlusMz { m: positive(m)? })
    }

    /// Certifies `Re(e^{-iφ} q'(z)) >= margin` on the closed disk, with
    /// `φ = arg q'(0)`. This implies univalence there and `|q'| >= margin`.
    pub fn polynomial(coeffs: Vec<Complex64>, univalence_margin: f64) -> Result<Self> {
        if !(univalence_margin > 0.0 && univalence_margin.is_finite()) {
            return Err(Error::Config("univalence margin must be positive".into()));
        }
        if coeffs.len() < 2 || coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Config("polynomial majorant needs finite coefficients of degree >= 1".into()));
        }
        if coeffs[1].norm() < 1e-12 {
            return Err(Error::Degenerate("polynomial majorant has q'(0) = 0".into()));
        }
        let found = re_rotated_derivative_min(&coeffs);
        if found < univalence_margin {
            return Err(Error::Config(format!(
                "polynomial majorant certifies only Re(e^(-i arg q'(0)) q') >= {found:.3e}, below margin {univalence_margin:.3e}"
            )));
        }
        Ok(MajorantQ::CertifiedPolynomial(CertifiedPolynomial { coeffs, univalence_margin }))
    }

    /// `M` for the two scaled families.
    pub fn scale(&self) -> Option<f64> {
        match self {
            MajorantQ::LinearMz { m } | MajorantQ::AffineOnePlusMz { m } => Some(*m),
            MajorantQ::CertifiedPolynomial(_) => None,
        }
    }

    pub fn center(&self) -> Complex64 {
        self.value(Complex64::new(0.0, 0.0))
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.derivatives(z)[0]
    }

    /// `[q, q', q'', q''']` at `z`.
    pub fn derivatives(&self, z: Complex64) -> [Complex64; 4] {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            MajorantQ::LinearMz { m } => [z * m, Complex64::new(*m, 0.0), zero, zero],
            MajorantQ::AffineOnePlusMz { m } => {
                [1.0 + z * m, Complex64::new(*m, 0.0), zero, zero]
            }
            MajorantQ::CertifiedPolynomial(p) => {
                let mut d = [zero; 4];
                for c in p.coeffs.iter().rev() {
                    d[3] = d[3] * z + d[2];
                    d[2] = d[2] * z + d[1];
                    d[1] = d[1] * z + d[0];
                    d[0] = d[0] * z + c;
                }
                [d[0], d[1], 2.0 * d[2], 6.0 * d[3]]
            }
        }
    }

    /// The range `q(U)`.
    pub fn region(&self) -> Region {
        match self {
            MajorantQ::LinearMz { m } => Region::Disk { center: Complex64::new(0.0, 0.0), radius: *m },
            MajorantQ::AffineOnePlusMz { m } => Region::Disk { center: Complex64::new(1.0, 0.0), radius: *m },
            MajorantQ::CertifiedPolynomial(p) => {
                let n = boundary_samples(p);
                let curve = (0..n).map(|j| self.value(unit_point(j, n))).collect();
                Region::Curve { curve, slack: chord_error(p, n) }
            }
        }
    }

    /// Signed distance from `w` to the boundary of `q(U)`, positive inside.
    pub fn signed_boundary_distance(&self, w: Complex64) -> f64 {
        self.region().depth(w)
    }
}

fn boundary_samples(p: &CertifiedPolynomial) -> usize {
    (64 * p.coeffs.len()).clamp(2048, 1 << 15)
}

/// Sagitta bound `(Δθ)^2/8 · max|d²q(e^{iθ})/dθ²|`.
fn chord_error(p: &CertifiedPolynomial, n: usize) -> f64 {
    let curvature: f64 = p.coeffs.iter().enumerate().map(|(k, c)| (k * k) as f64 * c.norm()).sum();
    let step = 2.0 * PI / n as f64;
    step * step / 8.0 * curvature
}

/// Lower bound for `min_{|z|=1} Re(e^{-iφ} q'(z))`; by harmonicity this is
/// also the minimum over the closed disk.
fn re_rotated_derivative_min(coeffs: &[Complex64]) -> f64 {
    let rot = coeffs[1].conj() / coeffs[1].norm();
    let q = MajorantQ::CertifiedPolynomial(CertifiedPolynomial { coeffs: coeffs.to_vec(), univalence_margin: 1.0 });
    let sampled = (0..CERT_SAMPLES)
        .map(|j| (rot * q.derivatives(unit_point(j, CERT_SAMPLES))[1]).re)
        .fold(f64::INFINITY, f64::min);
    // θ-derivative of q'(e^{iθ}) is i e^{iθ} q''(e^{iθ}), bounded by Σ k(k-1)|c_k|
    let lipschitz: f64 = coeffs.iter().enumerate().map(|(k, c)| (k * k.saturating_sub(1)) as f64 * c.norm()).sum();
    sampled - PI / CERT_SAMPLES as f64 * lipschitz
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scaled_families() {
        let q = MajorantQ::linear(2.0).unwrap();
        assert_eq!(q.value(c(0.5, 0.0)), c(1.0, 0.0));
        assert_eq!(q.derivatives(c(0.3, 0.1))[1], c(2.0, 0.0));
        assert!((q.signed_boundary_distance(c(1.0, 0.0)) - 1.0).abs() < 1e-15);
        let q = MajorantQ::affine(0.5).unwrap();
        assert_eq!(q.center(), c(1.0, 0.0));
        assert!(q.signed_boundary_distance(c(0.0, 0.0)) < 0.0);
        assert!(MajorantQ::linear(0.0).is_err());
        assert!(MajorantQ::affine(f64::NAN).is_err());
    }

    #[test]
    fn polynomial_certification() {
        // q = z + z²/4 has Re q' = 1 + Re(z)/2 >= 1/2 on the disk
        let q = MajorantQ::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.25, 0.0)], 0.4).unwrap();
        let d = q.derivatives(c(0.5, 0.0));
        assert!((d[0] - c(0.5625, 0.0)).norm() < 1e-15);
        assert!((d[1] - c(1.25, 0.0)).norm() < 1e-15);
        assert!((d[2] - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(d[3], c(0.0, 0.0));
        assert!(q.signed_boundary_distance(c(0.3, 0.2)) > 0.0);
        assert!(q.signed_boundary_distance(c(1.5, 0.0)) < 0.0);
        // z + z²/2 has q'(-1) = 0
        assert!(MajorantQ::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)], 0.01).is_err());
    }
}
