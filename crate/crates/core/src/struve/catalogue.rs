//! Kernels with elementary closed forms, kept as exact rationals.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::analytic::{Envelope, TailMajorant, TaylorSeries};
use crate::DEFAULT_R_CERT;

/// Order to which catalogue references are generated.
pub const CATALOGUE_ORDER: usize = 24;

#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub name: &'static str,
    pub p: f64,
    pub b: f64,
    pub c: f64,
    /// Exact coefficients `c_0..=c_N` of the closed form.
    pub exact: Vec<BigRational>,
}

impl ClosedForm {
    pub fn a(&self) -> f64 {
        self.p + (self.b + 2.0) / 2.0
    }

    /// Floating-point reference with a certified tail.
    pub fn reference_series(&self) -> TaylorSeries {
        let coeffs: Vec<Complex64> = self
            .exact
            .iter()
            .map(|q| Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        let n = coeffs.len() - 1;
        // both families satisfy |c_{m+1} / c_m| <= 1 / ((2m)(2m+1)), decreasing in m
        let rho = 1.0 / ((2 * n) as f64 * (2 * n + 1) as f64);
        let last = coeffs[n].norm();
        let env = Envelope { ln_scale: last.ln() - n as f64 * rho.ln(), power: 0.0, ln_rho: rho.ln() };
        TaylorSeries::with_majorant(coeffs, DEFAULT_R_CERT, TailMajorant::geometric(n + 1, env))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn build(order: usize, term: impl Fn(usize) -> BigRational) -> Vec<BigRational> {
    (0..=order)
        .map(|m| if m == 0 { BigRational::zero() } else { term(m) })
        .collect()
}

fn sign(m: usize) -> BigInt {
    // (-1)^{m+1}
    if m % 2 == 1 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// The four kernels that reduce to hyperbolic or trigonometric functions of `√z`.
pub fn closed_form_catalogue(order: usize) -> Vec<ClosedForm> {
    let two = || BigInt::from(2);
    vec![
        ClosedForm {
            name: "2(cosh(sqrt z) - 1)",
            p: 0.5,
            b: 1.0,
            c: -1.0,
            exact: build(order, |m| BigRational::new(two(), factorial(2 * m))),
        },
        ClosedForm {
            name: "sqrt(z) sinh(sqrt z)",
            p: -0.5,
            b: 1.0,
            c: -1.0,
            exact: build(order, |m| BigRational::new(BigInt::one(), factorial(2 * m - 1))),
        },
        ClosedForm {
            name: "2(1 - cos(sqrt z))",
            p: 0.5,
            b: 1.0,
            c: 1.0,
            exact: build(order, |m| BigRational::new(two() * sign(m), factorial(2 * m))),
        },
        ClosedForm {
            name: "sqrt(z) sin(sqrt z)",
            p: -0.5,
            b: 1.0,
            c: 1.0,
            exact: build(order, |m| BigRational::new(sign(m), factorial(2 * m - 1))),
        },
    ]
}

/// The two classical specializations `b = 1, c = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialOperator {
    /// `c = 1`, built on the Struve function.
    Struve,
    /// `c = -1`, built on the modified Struve function.
    ModifiedStruve,
}

/// Multiplier of `a_{n+1} z^{n+1}` for the special operators:
/// `(±1)^n n! / ((2n+1)! (p+3/2)_n)`.
pub fn special_operator_coeff(kind: SpecialOperator, p: Complex64, n: usize) -> Complex64 {
    let s = match kind {
        SpecialOperator::Struve => -1.0,
        SpecialOperator::ModifiedStruve => 1.0,
    };
    // n!/(2n+1)! = Π 1/(2(2j+1)) and (p+3/2)_n = Π (p+1/2+j), j = 1..n
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * s / (2.0 * (2 * j + 1) as f64 * (p + 0.5 + j as f64))
    })
}

/// Largest coefficient gap between the exact reference and `series`.
pub fn max_abs_gap(entry: &ClosedForm, series: &TaylorSeries) -> f64 {
    entry
        .exact
        .iter()
        .enumerate()
        .map(|(m, q)| {
            let exact = q.to_f64().unwrap_or(f64::NAN);
            (series.coeff(m) - Complex64::new(exact, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_second_coefficients() {
        let cat = closed_form_catalogue(CATALOGUE_ORDER);
        assert_eq!(cat.len(), 4);
        let cos = &cat[2];
        assert_eq!(cos.exact[2], BigRational::new((-1).into(), 12.into()));
        assert_eq!(cos.exact[3], BigRational::new(1.into(), 360.into()));
        let sinh = &cat[1];
        assert_eq!(sinh.exact[2], BigRational::new(1.into(), 6.into()));
        assert_eq!(cat[0].a(), 2.0);
        assert_eq!(cat[1].a(), 1.0);
        for e in &cat {
            assert_eq!(e.exact[0], BigRational::zero());
            assert_eq!(e.exact[1], BigRational::one());
        }
    }

    #[test]
    fn special_operator_first_terms() {
        let p = Complex64::new(0.5, 0.0);
        let s1 = special_operator_coeff(SpecialOperator::Struve, p, 1);
        assert!((s1 - Complex64::new(-1.0 / 12.0, 0.0)).norm() < 1e-17);
        let s2 = special_operator_coeff(SpecialOperator::Struve, p, 2);
        assert!((s2 - Complex64::new(1.0 / 360.0, 0.0)).norm() < 1e-18);
        let i1 = special_operator_coeff(SpecialOperator::ModifiedStruve, p, 1);
        assert!((i1 - Complex64::new(1.0 / 12.0, 0.0)).norm() < 1e-17);
    }
}
