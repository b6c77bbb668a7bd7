//! Pointwise residuals of the chain identities: the tuple obtained from the
//! jet of the first chain element must reproduce the later elements.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::transform::{psi_from_phi, transform, JetPoint, TransformKind};
use crate::analytic::{LocalJet, NormalizedFunction};
use crate::struve::apply_operator;
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainResidual {
    /// `max |(α, β, γ, δ) - chain elements|`.
    pub tuple: f64,
    /// Residual of the projection `φ = β - α`.
    pub beta_minus_alpha: f64,
    /// Residual of the projection `φ = γ - β`.
    pub gamma_minus_beta: f64,
}

impl ChainResidual {
    pub fn max(&self) -> f64 {
        self.tuple.max(self.beta_minus_alpha).max(self.gamma_minus_beta)
    }

    fn merge(self, o: ChainResidual) -> ChainResidual {
        ChainResidual {
            tuple: self.tuple.max(o.tuple),
            beta_minus_alpha: self.beta_minus_alpha.max(o.beta_minus_alpha),
            gamma_minus_beta: self.gamma_minus_beta.max(o.gamma_minus_beta),
        }
    }
}

/// Chain elements: `S_{a+1-j} f` (direct), `S_{a+1-j} f / z` (normalized) or
/// `S_{a-j} f / S_{a+1-j} f` (ratio), for `j = 0..4`.
pub fn chain_residual(
    kind: TransformKind,
    a: Complex64,
    c: Complex64,
    f: &NormalizedFunction,
    points: &[Complex64],
) -> Result<ChainResidual> {
    let depth = if kind == TransformKind::Ratio { 5 } else { 4 };
    let members = (0..depth)
        .map(|j| apply_operator(a + 1.0 - j as f64, c, f))
        .collect::<Result<Vec<_>>>()?;
    let beta_alpha = psi_from_phi(|g, _| g.beta - g.alpha, kind, a);
    let gamma_beta = psi_from_phi(|g, _| g.gamma - g.beta, kind, a);
    let mut out = ChainResidual::default();
    for &z in points {
        let jets: Vec<LocalJet> = members.iter().map(|m| m.jet(z)).collect();
        let elements: Vec<LocalJet> = match kind {
            TransformKind::Direct => jets,
            TransformKind::Normalized => jets.into_iter().map(|j| j / LocalJet::identity(z)).collect(),
            TransformKind::Ratio => jets.windows(2).map(|w| w[1] / w[0]).collect(),
        };
        let want: Vec<Complex64> = elements.iter().map(LocalJet::value).collect();
        let [r, s, t, u] = elements[0].euler(z);
        let jet = JetPoint::new(r, s, t, u, z)?;
        let tuple = transform(kind, &jet, a)?;
        let gap = tuple.values().iter().zip(&want).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        out = out.merge(ChainResidual {
            tuple: gap,
            beta_minus_alpha: (beta_alpha(&jet)? - (want[1] - want[0])).norm(),
            gamma_minus_beta: (gamma_beta(&jet)? - (want[2] - want[1])).norm(),
        });
    }
    Ok(out)
}
