use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Concentric sampling circles inside the unit disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angular_count: usize,
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angular_count: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Config("grid needs at least one radius".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::Config(format!("grid radii must lie in (0, 1): {radii:?}")));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("grid radii must increase strictly: {radii:?}")));
        }
        if angular_count < 64 {
            return Err(Error::Config(format!("angular count {angular_count} is below 64")));
        }
        Ok(DiskGrid { radii, angular_count })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn outer_radius(&self) -> f64 {
        *self.radii.last().expect("grid has a radius")
    }

    /// Points on the circle of radius `r`, angle `2πj/n`.
    pub fn circle(r: f64, n: usize) -> impl Iterator<Item = Complex64> {
        (0..n).map(move |j| r * unit_point(j, n))
    }

    /// Every grid point, innermost circle first.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.radii
            .iter()
            .flat_map(move |&r| Self::circle(r, self.angular_count))
    }
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid { radii: vec![0.5, 0.9, 0.99, 0.999], angular_count: 512 }
    }
}

/// `exp(2πij/n)` renormalized to unit modulus.
pub fn unit_point(j: usize, n: usize) -> Complex64 {
    unit(2.0 * PI * j as f64 / n as f64)
}

pub fn unit(theta: f64) -> Complex64 {
    let z = Complex64::new(theta.cos(), theta.sin());
    z / z.norm()
}
