//! Grid verdicts for `f ≺ q` and the hypothesis checks of the subordination lemmas.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::majorant::MajorantQ;
use crate::admissibility::Mode;
use crate::analytic::{complex_pair, unit_point, DiskGrid, TaylorSeries};
use crate::{Error, Result, EPS_STRICT};

/// Constant-term mismatch tolerated between `f(0)` and `q(0)`.
const CENTER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Subordinate,
    NotSubordinate,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubordinationReport {
    pub verdict: Verdict,
    /// `(r, max |f - q(0)|)` over the samples of each circle, tail excluded.
    pub sup_by_radius: Vec<(f64, f64)>,
    /// Certified depth of `f(D_R)` inside `q(U)` at the outer radius; negative
    /// when some sample is outside.
    pub margin: f64,
    #[serde(with = "complex_pair::option")]
    pub witness: Option<Complex64>,
}

pub fn is_subordinate(f: &TaylorSeries, q: &MajorantQ, grid: &DiskGrid) -> Result<SubordinationReport> {
    let outer = grid.outer_radius();
    if outer > f.r_cert() {
        return Err(Error::Domain(format!("grid radius {outer} exceeds r_cert {}", f.r_cert())));
    }
    let center = q.center();
    let n = grid.angular_count();
    let sup_by_radius: Vec<(f64, f64)> = grid
        .radii()
        .iter()
        .map(|&r| {
            let sup = DiskGrid::circle(r, n).map(|z| (f.horner(z) - center).norm()).fold(0.0, f64::max);
            (r, sup)
        })
        .collect();

    let mismatch = (f.coeff(0) - center).norm();
    if mismatch > CENTER_TOL {
        return Ok(SubordinationReport {
            verdict: Verdict::NotSubordinate,
            sup_by_radius,
            margin: -mismatch,
            witness: Some(Complex64::new(0.0, 0.0)),
        });
    }

    let region = q.region();
    let slack = region.slack();
    // deepest excursion outside q(U) beyond the tail, over every grid point
    let mut worst: Option<(f64, Complex64)> = None;
    let mut outer_depth = f64::INFINITY;
    for &r in grid.radii() {
        let tail = f.tail_at(r);
        for z in DiskGrid::circle(r, n) {
            let depth = region.depth(f.horner(z));
            let excess = -depth - tail - slack;
            if worst.is_none_or(|(e, _)| excess > e) {
                worst = Some((excess, z));
            }
            if r == outer {
                outer_depth = outer_depth.min(depth - tail - slack);
            }
        }
    }
    let (excess, z_star) = worst.expect("grid is nonempty");
    let (verdict, witness) = if excess > EPS_STRICT {
        (Verdict::NotSubordinate, Some(z_star))
    } else if outer_depth > EPS_STRICT {
        (Verdict::Subordinate, None)
    } else {
        (Verdict::Inconclusive, None)
    };
    Ok(SubordinationReport { verdict, sup_by_radius, margin: outer_depth, witness })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub mode: Mode,
    /// `min Re(ζ q''(ζ)/q'(ζ))` over boundary samples.
    pub curvature_min: f64,
    /// Subordination: `sup |f| / min |q'|`. Superordination: `max |f(z)/q'(z)|`.
    pub ratio: f64,
    /// `k` or `m`.
    pub bound: f64,
    pub max_violation: f64,
    pub holds: bool,
}

/// Checks `Re(ζq''/q') >= 0` on `|ζ| = 1` and the size condition that ties
/// `f_context` to `q'` (`<= k` for subordination, `<= m` for superordination).
pub fn lemma_condition_check(q: &MajorantQ, f_context: &TaylorSeries, grid: &DiskGrid, mode: Mode) -> LemmaReport {
    let n = grid.angular_count();
    let mut curvature_min = f64::INFINITY;
    let mut dq_min = f64::INFINITY;
    for j in 0..n {
        let zeta = unit_point(j, n);
        let d = q.derivatives(zeta);
        curvature_min = curvature_min.min((zeta * d[2] / d[1]).re);
        dq_min = dq_min.min(d[1].norm());
    }
    let (ratio, bound) = match mode {
        Mode::Subordination { k } => {
            let sup = grid
                .radii()
                .iter()
                .map(|&r| {
                    let tail = f_context.tail_at(r);
                    DiskGrid::circle(r, n).map(|z| f_context.horner(z).norm() + tail).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            (sup / dq_min, k)
        }
        Mode::Superordination { m } => {
            let ratio = grid
                .radii()
                .iter()
                .map(|&r| {
                    let tail = f_context.tail_at(r);
                    DiskGrid::circle(r, n)
                        .map(|z| (f_context.horner(z).norm() + tail) / q.derivatives(z)[1].norm())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            (ratio, m)
        }
    };
    let max_violation = (-curvature_min).max(ratio - bound).max(0.0);
    LemmaReport { mode, curvature_min, ratio, bound, max_violation, holds: max_violation <= CENTER_TOL }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> DiskGrid {
        DiskGrid::default()
    }

    #[test]
    fn half_identity_is_subordinate() {
        let f = TaylorSeries::from_real(&[0.0, 0.5]);
        let rep = is_subordinate(&f, &MajorantQ::linear(1.0).unwrap(), &grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::Subordinate);
        assert!((rep.margin - 0.5005).abs() < 1e-12);
        assert_eq!(rep.sup_by_radius.len(), 4);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn identity_case_is_subordinate() {
        for m in [0.3, 1.0, 7.0] {
            let f = TaylorSeries::from_real(&[0.0, m]);
            let rep = is_subordinate(&f, &MajorantQ::linear(m).unwrap(), &grid()).unwrap();
            assert_eq!(rep.verdict, Verdict::Subordinate, "M = {m}");
        }
    }

    #[test]
    fn overshoot_has_witness_near_one() {
        let f = TaylorSeries::from_real(&[0.0, 1.0, 0.6]);
        let rep = is_subordinate(&f, &MajorantQ::linear(1.5).unwrap(), &grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSubordinate);
        let w = rep.witness.unwrap();
        assert!((w - Complex64::new(0.999, 0.0)).norm() < 1e-12);
        // dense oracle: |w + 0.6 w²| at the witness exceeds the bound
        assert!((w + 0.6 * w * w).norm() > 1.5 + f.tail_at(0.999));
    }

    #[test]
    fn affine_and_center_mismatch() {
        let f = TaylorSeries::from_real(&[1.0, 0.4, 0.1]);
        let q = MajorantQ::affine(0.6).unwrap();
        assert_eq!(is_subordinate(&f, &q, &grid()).unwrap().verdict, Verdict::Subordinate);
        let g = TaylorSeries::from_real(&[0.5, 0.1]);
        let rep = is_subordinate(&g, &q, &grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSubordinate);
        assert_eq!(rep.witness, Some(Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn band_is_inconclusive() {
        // sup at r = 0.999 is 0.999 M; the bound sits inside the tolerance band
        let f = TaylorSeries::from_real(&[0.0, 1.0]);
        let q = MajorantQ::linear(0.999 + 0.5 * EPS_STRICT).unwrap();
        assert_eq!(is_subordinate(&f, &q, &grid()).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn polynomial_majorant_range() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let q = MajorantQ::polynomial(vec![c(0.0), c(1.0), c(0.25)], 0.4).unwrap();
        let inside = TaylorSeries::from_real(&[0.0, 0.5, 0.125]);
        assert_eq!(is_subordinate(&inside, &q, &grid()).unwrap().verdict, Verdict::Subordinate);
        let outside = TaylorSeries::from_real(&[0.0, 1.3]);
        assert_eq!(is_subordinate(&outside, &q, &grid()).unwrap().verdict, Verdict::NotSubordinate);
    }

    #[test]
    fn grid_beyond_certified_radius() {
        let f = TaylorSeries::from_real(&[0.0, 1.0]).with_r_cert(0.9);
        assert!(matches!(is_subordinate(&f, &MajorantQ::linear(2.0).unwrap(), &grid()), Err(Error::Domain(_))));
    }

    #[test]
    fn lemma_examples() {
        let f = TaylorSeries::from_real(&[0.0, 1.0]);
        let q = MajorantQ::linear(0.8).unwrap();
        let rep = lemma_condition_check(&q, &f, &grid(), Mode::Subordination { k: 2.0 });
        assert_eq!(rep.curvature_min, 0.0);
        assert!((rep.ratio - 0.999 / 0.8).abs() < 1e-12);
        assert!(rep.holds);
        let rep = lemma_condition_check(&MajorantQ::linear(0.4).unwrap(), &f, &grid(), Mode::Subordination { k: 2.0 });
        assert!(!rep.holds);
        assert!((rep.max_violation - (0.999 / 0.4 - 2.0)).abs() < 1e-12);
        let q = MajorantQ::affine(1.0).unwrap();
        let rep = lemma_condition_check(&q, &f, &grid(), Mode::Superordination { m: 2.0 });
        assert!(rep.holds);
        assert_eq!(rep.curvature_min, 0.0);
    }
}
