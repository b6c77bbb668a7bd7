use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

/// Value and first three derivatives of an analytic function at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalJet(pub [Complex64; 4]);

impl LocalJet {
    pub fn constant(c: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        LocalJet([c, zero, zero, zero])
    }

    /// Jet of the identity map at `z`.
    pub fn identity(z: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        LocalJet([z, Complex64::new(1.0, 0.0), zero, zero])
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// `(p, z p', z² p'', z³ p''')` at the base point `z`.
    pub fn euler(&self, z: Complex64) -> [Complex64; 4] {
        let [p, d1, d2, d3] = self.0;
        [p, z * d1, z * z * d2, z * z * z * d3]
    }

    pub fn scale(self, k: Complex64) -> Self {
        LocalJet(self.0.map(|d| d * k))
    }
}

impl Add for LocalJet {
    type Output = LocalJet;
    fn add(self, o: LocalJet) -> LocalJet {
        LocalJet(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for LocalJet {
    type Output = LocalJet;
    fn sub(self, o: LocalJet) -> LocalJet {
        LocalJet(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul for LocalJet {
    type Output = LocalJet;
    fn mul(self, o: LocalJet) -> LocalJet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = o.0;
        LocalJet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

impl Div for LocalJet {
    type Output = LocalJet;
    fn div(self, o: LocalJet) -> LocalJet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = o.0;
        let h0 = f0 / g0;
        let h1 = (f1 - h0 * g1) / g0;
        let h2 = (f2 - 2.0 * h1 * g1 - h0 * g2) / g0;
        let h3 = (f3 - 3.0 * h2 * g1 - 3.0 * h1 * g2 - h0 * g3) / g0;
        LocalJet([h0, h1, h2, h3])
    }
}
