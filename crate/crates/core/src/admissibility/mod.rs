//! Changes of variables between jets and operator tuples, and the
//! admissibility-class evaluators built on them.

mod chain;
mod classes;
mod transform;

pub use chain::{chain_residual, ChainResidual};
pub use classes::{
    check_admissibility, condition_bounds, condition_values, duality_holds, self_consistent_probe,
    Admissibility, AdmissibilityProbe, ClassId, FlatData, Mode, Variant, EQUATION_TOL,
};
pub use transform::{
    inverse_transform, psi_from_phi, transform, transform_direct, transform_normalized, transform_ratio,
    transform_values, GreekTuple, JetPoint, TransformKind, DENOM_GUARD,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::complex_pair;
use crate::subordination::MajorantQ;
use crate::Result;

/// One entry of a probe batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRequest {
    pub class_id: ClassId,
    #[serde(with = "complex_pair")]
    pub a: Complex64,
    pub q: MajorantQ,
    #[serde(default)]
    pub variant: Variant,
    pub probe: AdmissibilityProbe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub class_id: ClassId,
    pub passes: bool,
    pub slack: [f64; 3],
}

/// Evaluates a batch read from a JSON array.
pub fn evaluate_batch(json: &str) -> Result<Vec<ProbeRecord>> {
    let requests: Vec<ProbeRequest> = serde_json::from_str(json)?;
    requests
        .iter()
        .map(|r| {
            let out = check_admissibility(&r.probe, r.class_id, &r.q, r.a, r.variant)?;
            Ok(ProbeRecord { class_id: r.class_id, passes: out.passes, slack: out.slack })
        })
        .collect()
}
