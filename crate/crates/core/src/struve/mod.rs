//! The normalized generalized Struve kernel and the operator family it
//! generates by Hadamard convolution.

mod catalogue;

pub use catalogue::{
    closed_form_catalogue, max_abs_gap, special_operator_coeff, ClosedForm, SpecialOperator,
    CATALOGUE_ORDER,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    check_pole, complex_pair, ensure_finite, ln_gamma, Envelope, NormalizedFunction,
    TailMajorant, TaylorSeries,
};
use crate::{Error, Result, DEFAULT_R_CERT};

/// Parameters `(p, b, c)` of the generalized Struve function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StruveParams {
    #[serde(with = "complex_pair")]
    p: Complex64,
    #[serde(with = "complex_pair")]
    b: Complex64,
    #[serde(with = "complex_pair")]
    c: Complex64,
}

impl StruveParams {
    /// Checks that `a` avoids the nonpositive integers.
    pub fn new(p: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        let params = StruveParams { p, b, c };
        ensure_finite(c, "parameter c")?;
        ensure_finite(params.a(), "parameter a")?;
        check_pole("a", params.a())?;
        Ok(params)
    }

    /// Parameters with the given `a`, taking `b = 1` and `p = a - 3/2`.
    pub fn from_a(a: Complex64, c: Complex64) -> Result<Self> {
        Self::new(a - 1.5, Complex64::new(1.0, 0.0), c)
    }

    pub fn p(&self) -> Complex64 {
        self.p
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// `a = p + (b + 2) / 2`.
    pub fn a(&self) -> Complex64 {
        self.p + (self.b + 2.0) / 2.0
    }
}

/// Coefficient `(-c/4)^n / ((3/2)_n (a)_n)`.
pub fn struve_coeff(n: usize, a: Complex64, c: Complex64) -> Result<Complex64> {
    check_pole("a", a)?;
    let x = -c / 4.0;
    let mut s = Complex64::new(1.0, 0.0);
    for j in 0..n {
        s *= x / ((1.5 + j as f64) * (a + j as f64));
    }
    ensure_finite(s, "Struve coefficient")
}

/// `U_{a,c}(z) = Σ_{n>=0} struve_coeff(n) z^{n+1}` truncated at `order >= 8`.
pub fn u_series(a: Complex64, c: Complex64, order: usize) -> Result<TaylorSeries> {
    if order < 8 {
        return Err(Error::Config(format!("kernel order {order} is below 8")));
    }
    kernel(a, c, order)
}

fn kernel(a: Complex64, c: Complex64, order: usize) -> Result<TaylorSeries> {
    check_pole("a", a)?;
    let x = -c / 4.0;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    let mut s = Complex64::new(1.0, 0.0);
    for j in 0..order {
        if j > 0 {
            s *= x / ((0.5 + j as f64) * (a + (j - 1) as f64));
        }
        coeffs.push(ensure_finite(s, "Struve coefficient")?);
    }
    // coefficient m is s_{m-1}; beyond the order each step multiplies by at most rho
    let last = coeffs[order].norm();
    let majorant = if last == 0.0 || c.norm() == 0.0 {
        TailMajorant::zero(order + 1)
    } else {
        let n = order as f64;
        let dist = if a.re + n - 1.0 >= 0.0 { (a + n - 1.0).norm() } else { a.im.abs() };
        let rho = c.norm() / 4.0 / ((n + 0.5) * dist);
        if !rho.is_finite() {
            return Err(Error::TailNotCertified(format!(
                "kernel ratio bound is unbounded for a = {a}"
            )));
        }
        TailMajorant::geometric(
            order + 1,
            Envelope { ln_scale: last.ln() - n * rho.ln(), power: 0.0, ln_rho: rho.ln() },
        )
    };
    let s = TaylorSeries::with_majorant(coeffs, DEFAULT_R_CERT, majorant);
    if !s.is_certified() {
        return Err(Error::TailNotCertified(format!("kernel tail diverges for a = {a}, c = {c}")));
    }
    Ok(s)
}

/// Point value of `W_{p,b,c}` with an optional note when `z` sits on the
/// branch cut of `(z/2)^{p+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WValue {
    pub value: Complex64,
    pub on_branch_cut: bool,
}

/// `W_{p,b,c}(z) = (z/2)^{p+1} · 2/(√π Γ(a)) · Σ (-c z²/4)^n / ((3/2)_n (a)_n)`,
/// principal branch.
pub fn w_eval(params: &StruveParams, z: Complex64) -> Result<WValue> {
    let a = params.a();
    let lg = ln_gamma(a)?;
    let w = z * z;
    let x = -params.c * w / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for n in 1..2000 {
        term *= x / ((0.5 + n as f64) * (a + (n - 1) as f64));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && (a + n as f64).re > 0.0 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let exponent = params.p + 1.0;
    let norm = Complex64::new(2f64.ln() - 0.5 * PI.ln(), 0.0) - lg;
    let prefactor = if z == Complex64::new(0.0, 0.0) {
        if exponent == Complex64::new(0.0, 0.0) {
            norm.exp()
        } else if exponent.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            return Err(Error::Domain(format!(
                "W is singular at z = 0 when Re(p + 1) = {} <= 0",
                exponent.re
            )));
        }
    } else {
        (exponent * (z / 2.0).ln() + norm).exp()
    };
    Ok(WValue {
        value: ensure_finite(prefactor * sum, "W evaluation")?,
        on_branch_cut: z.im == 0.0 && z.re < 0.0,
    })
}

/// Whether `z` lies in the sector `-π < arg z <= π/2`, where the rotation
/// identity between the modified and ordinary kernels holds on principal branches.
pub fn in_lp_sector(z: Complex64) -> bool {
    z != Complex64::new(0.0, 0.0) && z.arg() > -PI && z.arg() <= PI / 2.0
}

/// `|L_p(z) + i e^{-ipπ/2} S_p(iz)|` with `L_p = W_{p,1,-1}` and `S_p = W_{p,1,1}`,
/// relative to `max(1, |L_p(z)|)`.
pub fn lp_residual(p: Complex64, z: Complex64) -> Result<f64> {
    if !in_lp_sector(z) {
        return Err(Error::Domain(format!("arg z = {} is outside (-π, π/2]", z.arg())));
    }
    let one = Complex64::new(1.0, 0.0);
    let l = w_eval(&StruveParams::new(p, one, -one)?, z)?.value;
    let s = w_eval(&StruveParams::new(p, one, one)?, Complex64::i() * z)?.value;
    let rotated = -Complex64::i() * (-Complex64::i() * p * PI / 2.0).exp() * s;
    Ok((l - rotated).norm() / l.norm().max(1.0))
}

/// `S_{a,c} f = U_{a,c} * f`.
pub fn apply_operator(a: Complex64, c: Complex64, f: &NormalizedFunction) -> Result<TaylorSeries> {
    let u = kernel(a, c, f.order())?;
    Ok(u.hadamard(f.series()))
}

/// Shifts carried by an [`OperatorFamily`], lowest first.
pub const SHIFTS: [i32; 5] = [-3, -2, -1, 0, 1];

/// `S_{a+j,c} f` for `j = -3..=1`.
#[derive(Clone, Debug)]
pub struct OperatorFamily {
    params: StruveParams,
    base: NormalizedFunction,
    members: Vec<TaylorSeries>,
}

impl OperatorFamily {
    pub fn params(&self) -> &StruveParams {
        &self.params
    }

    pub fn base(&self) -> &NormalizedFunction {
        &self.base
    }

    /// `S_{a+shift,c} f`; panics for shifts outside `-3..=1`.
    pub fn member(&self, shift: i32) -> &TaylorSeries {
        assert!((-3..=1).contains(&shift), "shift {shift} outside -3..=1");
        &self.members[(shift + 3) as usize]
    }
}

pub fn operator_family(params: &StruveParams, f: &NormalizedFunction) -> Result<OperatorFamily> {
    let a = params.a();
    for shift in SHIFTS {
        check_pole(&format!("shift {shift:+}: a{shift:+}"), a + shift as f64)?;
    }
    let members = SHIFTS
        .par_iter()
        .map(|&j| apply_operator(a + j as f64, params.c, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorFamily { params: *params, base: f.clone(), members })
}

/// Largest coefficient gap in `z (S_{a+1} f)' = a S_a f - (a-1) S_{a+1} f`.
pub fn recurrence_residual(params: &StruveParams, f: &NormalizedFunction) -> Result<f64> {
    let a = params.a();
    let upper = apply_operator(a + 1.0, params.c, f)?;
    let here = apply_operator(a, params.c, f)?;
    let lhs = upper.z_derivative();
    let rhs = here.scale(a).add_scaled(&upper, -(a - 1.0));
    Ok(lhs
        .coeffs()
        .iter()
        .zip(rhs.coeffs())
        .map(|(l, r)| (l - r).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(struve_coeff(0, c(2.0), c(1.0)).unwrap(), c(1.0));
        assert!((struve_coeff(1, c(2.0), c(-1.0)).unwrap() - c(1.0 / 12.0)).norm() < 1e-16);
        assert!((struve_coeff(1, c(2.0), c(1.0)).unwrap() - c(-1.0 / 12.0)).norm() < 1e-16);
        assert!(matches!(struve_coeff(3, c(0.0), c(1.0)), Err(Error::Pole(_))));
        assert!(matches!(struve_coeff(3, c(-2.0), c(1.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn kernel_shape() {
        let u = u_series(c(2.0), c(1.0), 12).unwrap();
        assert_eq!(u.coeff(0), c(0.0));
        assert_eq!(u.coeff(1), c(1.0));
        assert!((u.coeff(2) - c(-1.0 / 12.0)).norm() < 1e-16);
        assert!((u.coeff(3) - c(1.0 / 360.0)).norm() < 1e-17);
        assert!(u.tail_bound() < 1e-13, "{}", u.tail_bound());
        assert!(matches!(u_series(c(2.0), c(1.0), 7), Err(Error::Config(_))));
        let s = u_series(c(1.0), c(-1.0), 8).unwrap();
        assert!((s.coeff(2) - c(1.0 / 6.0)).norm() < 1e-16);
        assert!((s.coeff(3) - c(1.0 / 120.0)).norm() < 1e-17);
    }

    #[test]
    fn kernel_tail_covers_truncation() {
        let a = Complex64::new(-0.7, 0.4);
        let cc = Complex64::new(3.0, -1.0);
        let short = u_series(a, cc, 10).unwrap();
        let long = u_series(a, cc, 40).unwrap();
        for j in 0..64 {
            let z = 0.999 * crate::analytic::unit_point(j, 64);
            let gap = (short.evaluate(z).unwrap() - long.evaluate(z).unwrap()).norm();
            assert!(gap <= short.tail_bound(), "{gap} > {}", short.tail_bound());
        }
    }

    #[test]
    fn params_and_poles() {
        let p = StruveParams::new(c(0.5), c(1.0), c(1.0)).unwrap();
        assert_eq!(p.a(), c(2.0));
        assert!(StruveParams::from_a(c(2.5), c(1.0)).is_ok());
        let err = StruveParams::from_a(c(-1.0), c(1.0)).unwrap_err();
        assert!(matches!(err, Error::Pole(_)), "{err}");
    }

    #[test]
    fn operator_examples() {
        let z = NormalizedFunction::identity(10);
        let s = apply_operator(c(2.5), c(1.0), &z).unwrap();
        assert_eq!(s.coeffs(), z.series().coeffs());
        let g = NormalizedFunction::geometric(16);
        let s = apply_operator(c(2.5), c(1.0), &g).unwrap();
        let u = u_series(c(2.5), c(1.0), 16).unwrap();
        assert_eq!(s.coeffs(), u.coeffs());
        let fam = operator_family(&StruveParams::from_a(c(4.5), c(1.0)).unwrap(), &z).unwrap();
        for j in SHIFTS {
            assert_eq!(fam.member(j).coeffs(), z.series().coeffs());
        }
    }

    #[test]
    fn family_names_offending_shift() {
        let params = StruveParams::new(c(1.5), c(1.0), c(1.0)).unwrap();
        assert_eq!(params.a(), c(3.0));
        let err = operator_family(&params, &NormalizedFunction::identity(8)).unwrap_err();
        assert!(err.to_string().contains("shift -3"), "{err}");
    }

    #[test]
    fn recurrence_for_identity_is_exact() {
        let p = StruveParams::from_a(c(2.5), c(1.0)).unwrap();
        assert_eq!(recurrence_residual(&p, &NormalizedFunction::identity(8)).unwrap(), 0.0);
        let r = recurrence_residual(&p, &NormalizedFunction::geometric(32)).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn lp_rotation_in_sector() {
        for p in [-0.5, 0.5, 1.0, 1.5] {
            for z in [Complex64::new(1.2, 0.3), Complex64::new(-1.5, -0.4), Complex64::new(0.0, 1.9), Complex64::new(-0.3, -1.8)] {
                let r = lp_residual(c(p), z).unwrap();
                assert!(r < 1e-12, "p = {p}, z = {z}: {r}");
            }
        }
        assert!(matches!(lp_residual(c(0.5), Complex64::new(-1.0, 1.0)), Err(Error::Domain(_))));
        // outside the sector the branch of (iz/2)^{p+1} flips and the identity fails
        let z = Complex64::new(-1.0, 1.0);
        let one = c(1.0);
        let l = w_eval(&StruveParams::new(c(0.5), one, -one).unwrap(), z).unwrap().value;
        let s = w_eval(&StruveParams::new(c(0.5), one, one).unwrap(), Complex64::i() * z).unwrap().value;
        let rotated = -Complex64::i() * (-Complex64::i() * 0.25 * PI).exp() * s;
        assert!((l - rotated).norm() > 1e-3);
    }

    #[test]
    fn w_vanishes_at_origin_and_flags_cut() {
        let p = StruveParams::new(c(0.5), c(1.0), c(1.0)).unwrap();
        assert_eq!(w_eval(&p, c(0.0)).unwrap().value, c(0.0));
        assert!(w_eval(&p, c(-1.0)).unwrap().on_branch_cut);
        assert!(!w_eval(&p, c(1.0)).unwrap().on_branch_cut);
        let q = StruveParams::new(c(-1.5), c(2.0), c(1.0)).unwrap();
        assert!(matches!(w_eval(&q, c(0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn w_matches_kernel_through_the_substitution() {
        // W(z) = z^{p+1} 2^{-p} U_{p,b,c}(z²) / (√π Γ(a)), with U_{a,c}(ζ) = ζ U_{p,b,c}(ζ)
        let p = StruveParams::new(Complex64::new(0.3, 0.2), c(1.4), Complex64::new(0.5, -1.0)).unwrap();
        let u = u_series(p.a(), p.c(), 40).unwrap();
        for z in [Complex64::new(0.4, 0.3), Complex64::new(-0.2, 0.7), c(0.9)] {
            let w = w_eval(&p, z).unwrap().value;
            let zeta = z * z;
            let upbc = u.evaluate(zeta).unwrap() / zeta;
            let lg = ln_gamma(p.a()).unwrap();
            let want = ((p.p() + 1.0) * z.ln() - p.p() * 2f64.ln() - 0.5 * PI.ln() - lg).exp() * upbc;
            assert!((w - want).norm() < 1e-10 * want.norm().max(1.0), "{w} vs {want}");
        }
    }
}
