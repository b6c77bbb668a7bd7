use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result, POLE_RADIUS};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `PoleError` when `z` lies within [`POLE_RADIUS`] of `0, -1, -2, ...`.
pub fn check_pole(what: &str, z: Complex64) -> Result<()> {
    let nearest = z.re.round();
    if nearest <= 0.0 && (z - nearest).norm() < POLE_RADIUS {
        return Err(Error::Pole(format!(
            "{what} = {} + {}i is within {POLE_RADIUS:e} of {nearest}",
            z.re, z.im
        )));
    }
    Ok(())
}

/// Logarithm of the complex gamma function.
///
/// Lanczos (g = 7, nine terms) on `Re z >= 1/2`, reflection below. Only
/// `exp(ln_gamma(z)) == Γ(z)` is guaranteed; the imaginary part is not
/// normalized to a particular branch.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole("gamma argument", z)?;
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let rest = lanczos(Complex64::new(1.0, 0.0) - z);
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - rest);
    }
    Ok(lanczos(z))
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = e^{-iπz} (1 - w) i/2 with w = e^{2iπz}, |w| <= 1
    let a = -2.0 * PI * z.im;
    let theta = 2.0 * PI * z.re;
    let ea = a.exp();
    let half = (0.5 * theta).sin();
    let one_minus_w = Complex64::new(-a.exp_m1() + ea * 2.0 * half * half, -ea * theta.sin());
    let i = Complex64::i();
    -i * PI * z + one_minus_w.ln() + Complex64::new(-(2.0f64.ln()), 0.5 * PI)
}

/// Rising factorial `(λ)_n = λ(λ+1)...(λ+n-1)`, with `(λ)_0 = 1`.
pub fn pochhammer(lambda: Complex64, n: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..n {
        acc *= lambda + j as f64;
        if !(acc.re.is_finite() && acc.im.is_finite()) {
            return Err(Error::Range(format!(
                "({}+{}i)_{n} overflows at factor {j}",
                lambda.re, lambda.im
            )));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn integer_and_half_values() {
        assert!(ln_gamma(c(1.0)).unwrap().norm() < 1e-14);
        assert!((ln_gamma(c(5.0)).unwrap() - c(24f64.ln())).norm() < 1e-13);
        let half = ln_gamma(c(0.5)).unwrap();
        assert!((half.exp() - c(PI.sqrt())).norm() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for z in [0.0, -1.0, -7.0, -3.0 + 5e-9] {
            assert!(matches!(ln_gamma(c(z)), Err(Error::Pole(_))));
        }
        assert!(ln_gamma(c(-3.0 + 1e-6)).is_ok());
        assert!(ln_gamma(Complex64::new(-2.0, 1e-3)).is_ok());
    }

    #[test]
    fn reflection_matches_recursion() {
        // Γ(z+1) = zΓ(z) across the reflection boundary
        for z in [c(0.3), c(-0.7), Complex64::new(-2.4, 0.8), Complex64::new(0.1, -30.0)] {
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            let d = (lhs - rhs).exp();
            assert!((d - 1.0).norm() < 1e-12, "{z}: {d}");
        }
    }

    #[test]
    fn pochhammer_small_cases() {
        assert_eq!(pochhammer(c(1.5), 0).unwrap(), c(1.0));
        assert!((pochhammer(c(1.5), 2).unwrap() - c(3.75)).norm() < 1e-15);
        assert!((pochhammer(c(2.0), 3).unwrap() - c(24.0)).norm() < 1e-15);
        assert!(matches!(pochhammer(c(1e200), 3), Err(Error::Range(_))));
    }
}
