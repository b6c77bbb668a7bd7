//! Membership conditions of the admissibility classes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::transform::{inverse_transform, transform_values, GreekTuple, TransformKind, DENOM_GUARD};
use crate::analytic::{complex_pair, ensure_finite, unit};
use crate::subordination::MajorantQ;
use crate::{Error, Result};

/// Relative tolerance on the α- and β-equations.
pub const EQUATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassId {
    D1,
    D15,
    D3,
    D4,
    D5a,
    D7,
    D8,
    D9,
}

impl ClassId {
    pub const ALL: [ClassId; 8] =
        [ClassId::D1, ClassId::D15, ClassId::D3, ClassId::D4, ClassId::D5a, ClassId::D7, ClassId::D8, ClassId::D9];

    pub fn kind(self) -> TransformKind {
        match self {
            ClassId::D1 | ClassId::D15 | ClassId::D7 => TransformKind::Direct,
            ClassId::D3 | ClassId::D4 | ClassId::D8 => TransformKind::Normalized,
            ClassId::D5a | ClassId::D9 => TransformKind::Ratio,
        }
    }

    pub fn is_flat(self) -> bool {
        matches!(self, ClassId::D15 | ClassId::D4)
    }

    pub fn is_superordination(self) -> bool {
        matches!(self, ClassId::D7 | ClassId::D8 | ClassId::D9)
    }
}

/// Which reading of the third condition to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// The class definition as printed.
    #[default]
    AsDefinition,
    /// Third condition with the order `k` in the lead term: `(1-k)α` in place
    /// of `(1-a)α`. Same as the definition outside the direct classes.
    AsProof,
    /// `Re(t/s + 1)` and `Re(u/s)` recomputed from the inverse change of variables.
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Subordination { k: f64 },
    Superordination { m: f64 },
}

impl Mode {
    pub fn order(self) -> f64 {
        match self {
            Mode::Subordination { k } => k,
            Mode::Superordination { m } => m,
        }
    }

    fn validate(self) -> Result<Self> {
        let v = self.order();
        if v.is_finite() && v >= 2.0 {
            Ok(self)
        } else {
            Err(Error::Config(format!("k or m = {v} must be at least 2")))
        }
    }
}

/// Data of the flat classes for `q = Mz` and `q = 1 + Mz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatData {
    pub theta: f64,
    #[serde(rename = "L", with = "complex_pair")]
    pub l: Complex64,
    #[serde(rename = "N", with = "complex_pair")]
    pub n_aux: Complex64,
    #[serde(rename = "M")]
    pub m: f64,
}

impl FlatData {
    /// `(Re(L e^{-iθ}) - (k-1)kM, Re(N e^{-iθ}))`.
    pub fn constraint_slacks(&self, k: f64) -> [f64; 2] {
        let rot = unit(-self.theta);
        [(self.l * rot).re - (k - 1.0) * k * self.m, (self.n_aux * rot).re]
    }

    /// The tuple a flat class prescribes.
    pub fn tuple(&self, class: ClassId, a: Complex64, k: f64) -> Result<GreekTuple> {
        let me = self.m * unit(self.theta);
        let (a1, a2) = (a - 1.0, a - 2.0);
        let (l, n) = (self.l, self.n_aux);
        match class {
            ClassId::D15 => GreekTuple::new(
                me,
                (k + a1) * me / a,
                (l + (2.0 * k + a - 2.0) * a1 * me) / (a * a1),
                (n + 3.0 * a1 * l + a1 * a2 * (3.0 * k + a - 3.0) * me) / (a * a1 * a2),
            ),
            ClassId::D4 => GreekTuple::new(
                1.0 + me,
                (a + (k + a) * me) / a,
                (l + a * a1 + a * (2.0 * k + a - 1.0) * me) / (a * a1),
                (n + 3.0 * a * l + a * a1 * a2 + a1 * a * (3.0 * k + a - 2.0) * me) / (a * a1 * a2),
            ),
            other => Err(Error::Config(format!("{other:?} is not a flat class"))),
        }
    }
}

/// A point at which class membership conditions are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbeJson", into = "ProbeJson")]
pub struct AdmissibilityProbe {
    tuple: GreekTuple,
    zeta: Complex64,
    mode: Mode,
    flat: Option<FlatData>,
}

#[derive(Serialize, Deserialize)]
struct ProbeJson {
    tuple: GreekTuple,
    #[serde(with = "complex_pair")]
    zeta: Complex64,
    mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flat: Option<FlatData>,
}

impl TryFrom<ProbeJson> for AdmissibilityProbe {
    type Error = Error;

    fn try_from(j: ProbeJson) -> Result<Self> {
        let probe = AdmissibilityProbe::at(j.tuple, j.zeta, j.mode)?;
        match j.flat {
            None => Ok(probe),
            Some(flat) => probe.with_flat(flat),
        }
    }
}

impl From<AdmissibilityProbe> for ProbeJson {
    fn from(p: AdmissibilityProbe) -> Self {
        ProbeJson { tuple: p.tuple, zeta: p.zeta, mode: p.mode, flat: p.flat }
    }
}

impl AdmissibilityProbe {
    /// Probe at the boundary point `zeta`, renormalized to modulus one.
    pub fn at(tuple: GreekTuple, zeta: Complex64, mode: Mode) -> Result<Self> {
        let zeta = ensure_finite(zeta, "zeta")?;
        if zeta.norm() == 0.0 {
            return Err(Error::Domain("zeta = 0 has no direction".into()));
        }
        Ok(AdmissibilityProbe { tuple, zeta: unit(zeta.arg()), mode: mode.validate()?, flat: None })
    }

    /// Flat-class probe at `ζ = e^{iθ}` with the tuple the class prescribes.
    pub fn flat(class: ClassId, a: Complex64, data: FlatData, k: f64) -> Result<Self> {
        let mode = Mode::Subordination { k };
        let tuple = data.tuple(class, a, k)?;
        Self::at(tuple, unit(data.theta), mode)?.with_flat(data)
    }

    fn with_flat(mut self, data: FlatData) -> Result<Self> {
        let Mode::Subordination { k } = self.mode else {
            return Err(Error::Config("flat probes use subordination mode".into()));
        };
        if !(data.m > 0.0 && data.m.is_finite()) {
            return Err(Error::Config(format!("flat probe M = {} must be positive", data.m)));
        }
        let [c1, c2] = data.constraint_slacks(k);
        if c1 < 0.0 || c2 < 0.0 {
            return Err(Error::Config(format!(
                "flat probe violates Re(L e^(-i theta)) >= (k-1)kM or Re(N e^(-i theta)) >= 0 (slacks {c1:.3e}, {c2:.3e})"
            )));
        }
        ensure_finite(data.l, "L")?;
        ensure_finite(data.n_aux, "N")?;
        self.flat = Some(data);
        Ok(self)
    }

    pub fn tuple(&self) -> &GreekTuple {
        &self.tuple
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn flat_data(&self) -> Option<&FlatData> {
        self.flat.as_ref()
    }
}

/// Result of one class evaluation. `slack[0]` is the residual of the
/// α/β-equations (or of the prescribed flat tuple); `slack[1]`, `slack[2]`
/// are positive exactly when the two inequalities hold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub passes: bool,
    pub slack: [f64; 3],
}

fn guard(v: Complex64, what: &str) -> Result<Complex64> {
    if v.norm() <= DENOM_GUARD {
        Err(Error::Degenerate(format!("{what} = {v} is below {DENOM_GUARD:e}")))
    } else {
        Ok(v)
    }
}

/// β-equation right-hand side for `r = q(ζ)` and `s = kζq'` or `ζq'/m`.
fn required_beta(kind: TransformKind, r: Complex64, s: Complex64, a: Complex64) -> Result<Complex64> {
    Ok(match kind {
        TransformKind::Direct => (s + (a - 1.0) * r) / a,
        TransformKind::Normalized => (s + a * r) / a,
        TransformKind::Ratio => (s / guard(r, "q(zeta)")? + a * r - 1.0) / (a - 1.0),
    })
}

/// `s` of the boundary jet: `kζq'(ζ)` or `ζq'(ζ)/m`.
fn boundary_s(q1: Complex64, zeta: Complex64, mode: Mode) -> Complex64 {
    match mode {
        Mode::Subordination { k } => k * zeta * q1,
        Mode::Superordination { m } => zeta * q1 / m,
    }
}

/// Right-hand sides of the two inequalities: `k Re(ζq''/q' + 1)`, `k² Re(ζ²q'''/q')`
/// or the same with `1/m`, `1/m²`.
pub fn condition_bounds(q: &MajorantQ, zeta: Complex64, mode: Mode) -> Result<[f64; 2]> {
    let [_, q1, q2, q3] = q.derivatives(zeta);
    let q1 = guard(q1, "q'(zeta)")?;
    let r2 = (zeta * q2 / q1 + 1.0).re;
    let r3 = (zeta * zeta * q3 / q1).re;
    Ok(match mode {
        Mode::Subordination { k } => [k * r2, k * k * r3],
        Mode::Superordination { m } => [r2 / m, r3 / (m * m)],
    })
}

/// Left-hand sides of the two inequalities for a tuple.
pub fn condition_values(
    class: ClassId,
    tuple: &GreekTuple,
    a: Complex64,
    order: f64,
    variant: Variant,
) -> Result<[f64; 2]> {
    let kind = class.kind();
    if variant == Variant::Derived {
        let [_, s, t, u] = inverse_transform(kind, tuple, a)?;
        let s = guard(s, "s")?;
        return Ok([(t / s + 1.0).re, (u / s).re]);
    }
    let GreekTuple { alpha: al, beta: be, gamma: ga, delta: de } = *tuple;
    let (a1, a2, a3) = (a - 1.0, a - 2.0, a - 3.0);
    let v = match kind {
        TransformKind::Direct => {
            let den = guard(a * be - a1 * al, "a beta - (a-1) alpha")?;
            let second = (a * a1 * ga - a2 * a1 * al) / den - (2.0 * a - 3.0);
            let lead = match variant {
                Variant::AsProof => Complex64::new(1.0 - order, 0.0),
                _ => 1.0 - a,
            };
            let den3 = guard(al + a * (be - al), "alpha + a(beta - alpha)")?;
            let third = a * a1 * (lead * al + 3.0 * a * be + (1.0 - 3.0 * a) * ga + a2 * de) / den3;
            [second, third]
        }
        TransformKind::Normalized => {
            let den = guard(be - al, "beta - alpha")?;
            let second = a1 * (ga - al) / den + (1.0 - 2.0 * a);
            let third = (a1 * a2 * (de - al) - 3.0 * a * a1 * (ga - 2.0 * al + be)) / den + 6.0 * a * a;
            [second, third]
        }
        TransformKind::Ratio => {
            let den = guard(a1 * be * al - a * al * al + al, "(a-1) beta alpha - a alpha^2 + alpha")?;
            let second = (a2 * ga - a1 * be + 1.0) * a1 * be * al / den + a1 * be + 1.0;
            let num = de * ga * be * al * a1 * a2 * a3 - a2 * a2 * a1 * be * ga * ga * al - be * ga * al * a1 * a2
                - ga * be * be * al * a1 * a1 * a2
                + be * be * be * al * a1 * a1 * a1
                - 2.0 * be * al * a1
                + be * be * al * a1 * a1
                - al * be * ga * a * a1 * a2
                + be * be * al * a * a1 * a1
                - a * a1 * be * al;
            let rest = 3.0 * ga * be * a1 * a2 - 4.0 * be * a1 * (a * al - 1.0) - 2.0 * be * be * a1 * a1
                - be * a * a1
                - 3.0 * a * al * be * a1
                + 2.0 * a * a * al
                - a
                + 4.0 * a * a * al * al
                + a * al;
            [second, num / den + rest]
        }
    };
    let out = [ensure_finite(v[0], "second condition")?.re, ensure_finite(v[1], "third condition")?.re];
    Ok(out)
}

fn check_mode(class: ClassId, mode: Mode) -> Result<()> {
    let dual = matches!(mode, Mode::Superordination { .. });
    if dual != class.is_superordination() {
        return Err(Error::Config(format!("{class:?} does not accept {mode:?}")));
    }
    Ok(())
}

/// Evaluates the defining conditions of `class` at `probe`.
pub fn check_admissibility(
    probe: &AdmissibilityProbe,
    class: ClassId,
    q: &MajorantQ,
    a: Complex64,
    variant: Variant,
) -> Result<Admissibility> {
    check_mode(class, probe.mode)?;
    ensure_finite(a, "parameter a")?;
    if class.is_flat() {
        return check_flat(probe, class, q, a);
    }
    let zeta = probe.zeta;
    let [q0, q1, _, _] = q.derivatives(zeta);
    guard(q1, "q'(zeta)")?;
    let beta_req = required_beta(class.kind(), q0, boundary_s(q1, zeta, probe.mode), a)?;
    let t = &probe.tuple;
    let scale = 1.0f64.max(q0.norm()).max(beta_req.norm());
    let s1 = (t.alpha - q0).norm().max((t.beta - beta_req).norm());
    let [b2, b3] = condition_bounds(q, zeta, probe.mode)?;
    let [v2, v3] = condition_values(class, t, a, probe.mode.order(), variant)?;
    let (s2, s3) = match probe.mode {
        Mode::Subordination { .. } => (v2 - b2, v3 - b3),
        Mode::Superordination { .. } => (b2 - v2, b3 - v3),
    };
    Ok(Admissibility { passes: s1 <= EQUATION_TOL * scale && s2 >= 0.0 && s3 >= 0.0, slack: [s1, s2, s3] })
}

fn check_flat(probe: &AdmissibilityProbe, class: ClassId, q: &MajorantQ, a: Complex64) -> Result<Admissibility> {
    let data = probe
        .flat
        .ok_or_else(|| Error::Config(format!("{class:?} needs a flat probe with theta, L, N and M")))?;
    let matches_q = match (class, q) {
        (ClassId::D15, MajorantQ::LinearMz { m }) | (ClassId::D4, MajorantQ::AffineOnePlusMz { m }) => {
            (m - data.m).abs() <= 1e-12 * m
        }
        _ => false,
    };
    if !matches_q {
        return Err(Error::Config(format!("{class:?} requires its own majorant family with M = {}", data.m)));
    }
    let k = probe.mode.order();
    let want = data.tuple(class, a, k)?;
    let s1 = probe.tuple.max_gap(&want);
    let [s2, s3] = data.constraint_slacks(k);
    let scale = want.values().iter().map(|v| v.norm()).fold(1.0, f64::max);
    Ok(Admissibility { passes: s1 <= EQUATION_TOL * scale && s2 >= 0.0 && s3 >= 0.0, slack: [s1, s2, s3] })
}

/// A probe built from `q`'s own boundary jet: `r = q(ζ)`, `s` as the class
/// prescribes, and `t`, `u` placed `margin` inside both inequalities of the
/// lemma's class, then mapped through the class's change of variables.
pub fn self_consistent_probe(
    class: ClassId,
    q: &MajorantQ,
    zeta: Complex64,
    mode: Mode,
    a: Complex64,
    margin: f64,
) -> Result<AdmissibilityProbe> {
    check_mode(class, mode)?;
    if class.is_flat() {
        let m = q
            .scale()
            .ok_or_else(|| Error::Config(format!("{class:?} requires q = Mz or 1 + Mz")))?;
        let k = mode.order();
        let theta = zeta.arg();
        let data = FlatData {
            theta,
            l: ((k - 1.0) * k * m + margin) * unit(theta),
            n_aux: margin * unit(theta),
            m,
        };
        return AdmissibilityProbe::flat(class, a, data, k);
    }
    let zeta = unit(zeta.arg());
    let [r, q1, _, _] = q.derivatives(zeta);
    let s = guard(boundary_s(q1, zeta, mode), "s")?;
    let [b2, b3] = condition_bounds(q, zeta, mode)?;
    let sign = match mode {
        Mode::Subordination { .. } => 1.0,
        Mode::Superordination { .. } => -1.0,
    };
    let t = s * (b2 + sign * margin - 1.0);
    let u = s * (b3 + sign * margin);
    let tuple = transform_values(class.kind(), [r, s, t, u], a)?;
    // the β-equation must hold to rounding; pin β to its defining formula
    let beta = required_beta(class.kind(), r, s, a)?;
    let tuple = GreekTuple::new(r, beta, tuple.gamma, tuple.delta)?;
    AdmissibilityProbe::at(tuple, zeta, mode)
}

/// Second-condition duality at a common bound `b`: the `>=` reading and the
/// `<=` reading of the shared left-hand side disagree unless it equals `b`.
pub fn duality_holds(class: ClassId, tuple: &GreekTuple, a: Complex64, bound: f64) -> Result<bool> {
    let [v, _] = condition_values(class, tuple, a, 2.0, Variant::AsDefinition)?;
    let ge = v >= bound;
    let le = v <= bound;
    Ok(v == bound || ge != le)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d15_flat_example() {
        let data = FlatData { theta: 0.0, l: c(2.0, 0.0), n_aux: c(0.0, 0.0), m: 1.0 };
        let probe = AdmissibilityProbe::flat(ClassId::D15, c(3.0, 0.0), data, 2.0).unwrap();
        assert!((probe.tuple().beta - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        let q = MajorantQ::linear(1.0).unwrap();
        let out = check_admissibility(&probe, ClassId::D15, &q, c(3.0, 0.0), Variant::AsDefinition).unwrap();
        assert!(out.passes);
        assert_eq!(out.slack, [0.0, 0.0, 0.0]);
        let bad = FlatData { l: c(1.0, 0.0), ..data };
        assert!(AdmissibilityProbe::flat(ClassId::D15, c(3.0, 0.0), bad, 2.0).is_err());
    }

    #[test]
    fn d1_self_consistent_linear() {
        let q = MajorantQ::linear(1.0).unwrap();
        let mode = Mode::Subordination { k: 2.0 };
        let a = c(3.5, 0.0);
        let probe = self_consistent_probe(ClassId::D1, &q, c(1.0, 0.0), mode, a, 0.1).unwrap();
        let out = check_admissibility(&probe, ClassId::D1, &q, a, Variant::Derived).unwrap();
        assert!(out.slack[0] < 1e-12, "{out:?}");
        assert!((out.slack[1] - 0.1).abs() < 1e-12 && (out.slack[2] - 0.1).abs() < 1e-12, "{out:?}");
        assert!(out.passes);
        let out = check_admissibility(&probe, ClassId::D1, &q, a, Variant::AsDefinition).unwrap();
        assert!(out.slack[0] < 1e-12);
        assert!((out.slack[1] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn mode_mismatch_is_config_error() {
        let q = MajorantQ::affine(0.5).unwrap();
        let probe = self_consistent_probe(ClassId::D3, &q, c(0.0, 1.0), Mode::Subordination { k: 2.0 }, c(4.0, 0.0), 0.1)
            .unwrap();
        assert!(matches!(
            check_admissibility(&probe, ClassId::D8, &q, c(4.0, 0.0), Variant::AsDefinition),
            Err(Error::Config(_))
        ));
        assert!(AdmissibilityProbe::at(*probe.tuple(), c(1.0, 0.0), Mode::Subordination { k: 1.5 }).is_err());
    }

    #[test]
    fn normalized_definition_matches_inverse() {
        let t = GreekTuple::new(c(0.7, 0.1), c(1.2, -0.4), c(0.3, 0.8), c(-0.5, 0.2)).unwrap();
        let a = c(4.3, 0.5);
        let def = condition_values(ClassId::D3, &t, a, 2.0, Variant::AsDefinition).unwrap();
        let der = condition_values(ClassId::D3, &t, a, 2.0, Variant::Derived).unwrap();
        assert!((def[0] - der[0]).abs() < 1e-11, "{def:?} {der:?}");
        assert!((def[1] - der[1]).abs() < 1e-10, "{def:?} {der:?}");
    }

    #[test]
    fn direct_second_condition_matches_inverse() {
        let t = GreekTuple::new(c(0.7, 0.1), c(1.2, -0.4), c(0.3, 0.8), c(-0.5, 0.2)).unwrap();
        let a = c(4.3, 0.5);
        let def = condition_values(ClassId::D1, &t, a, 2.0, Variant::AsDefinition).unwrap();
        let der = condition_values(ClassId::D1, &t, a, 2.0, Variant::Derived).unwrap();
        assert!((def[0] - der[0]).abs() < 1e-11);
        // the printed third condition is not the inverse image of u/s
        assert!((def[1] - der[1]).abs() > 1e-3);
    }

    #[test]
    fn ratio_second_condition_offset() {
        // the printed ratio-class expression exceeds the inverse image of t/s + 1 by 2aα
        let t = GreekTuple::new(c(0.7, 0.1), c(1.2, -0.4), c(0.3, 0.8), c(-0.5, 0.2)).unwrap();
        let a = c(4.3, 0.5);
        let def = condition_values(ClassId::D5a, &t, a, 2.0, Variant::AsDefinition).unwrap();
        let der = condition_values(ClassId::D5a, &t, a, 2.0, Variant::Derived).unwrap();
        assert!((def[0] - der[0] - (2.0 * a * t.alpha).re).abs() < 1e-11, "{def:?} {der:?}");
    }

    #[test]
    fn probe_json_round_trip() {
        let q = MajorantQ::linear(1.5).unwrap();
        let probe =
            self_consistent_probe(ClassId::D15, &q, c(0.0, 1.0), Mode::Subordination { k: 3.0 }, c(3.2, 0.0), 0.2)
                .unwrap();
        let text = serde_json::to_string(&probe).unwrap();
        let back: AdmissibilityProbe = serde_json::from_str(&text).unwrap();
        assert_eq!(back, probe);
    }
}

