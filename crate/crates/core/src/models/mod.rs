//! Closed-form A(t,0)/B(t,0) maps for the four qubit models, and the
//! eigenvalues of their intermediate Choi matrices B(t₂,t₁).
//!
//! All maps act on a qubit (`d = 2`) in the `{00, 01, 10, 11}` ordering of
//! `vec(ρ)`. The closed-form eigenvalue functions exist to check the
//! numerical pipeline; sweeps never use them.

mod profile;

pub use profile::NoiseProfile;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynmaps::{DynamicalMap, StochasticMap};
use crate::error::{Error, Result};
use crate::tensor::{CMatrix, SINGULAR_REL_TOL};

/// Ratio denominators below this are treated as zeros of the profile.
const ROOT_TOL: f64 = SINGULAR_REL_TOL;

fn singular(denominator: f64) -> Error {
    Error::Singular { pivot: denominator.abs(), threshold: ROOT_TOL }
}

fn sorted(mut v: [f64; 4]) -> [f64; 4] {
    v.sort_by(f64::total_cmp);
    v
}

// ---------------------------------------------------------------- Werner

/// Choi matrix `(1−p)/2·I₄ + 2p|ψ⟩⟨ψ|` with `|ψ⟩ = (|00⟩ + |11⟩)/√2`.
pub fn werner_b(p: f64) -> Result<DynamicalMap> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("Werner parameter p={p} outside [0, 1]")));
    }
    let mut b = CMatrix::identity(4).scale_real((1.0 - p) / 2.0);
    for i in [0, 3] {
        for j in [0, 3] {
            b[(i, j)] += Complex64::new(p, 0.0);
        }
    }
    DynamicalMap::new(b)
}

/// A-form of [`werner_b`], obtained by realignment.
pub fn werner_a(p: f64) -> Result<StochasticMap> {
    Ok(werner_b(p)?.to_stochastic())
}

/// `((1−q)/2 ×3, (1+3q)/2)` with `q = p₂/p₁`, ascending.
pub fn werner_intermediate_eigs(p1: f64, p2: f64) -> Result<[f64; 4]> {
    if p1.abs() < ROOT_TOL {
        return Err(singular(p1));
    }
    let q = p2 / p1;
    let l = (1.0 - q) / 2.0;
    Ok(sorted([l, l, l, (1.0 + 3.0 * q) / 2.0]))
}

// ---------------------------------------------------------------- optical

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalParams {
    pub a1: f64,
    pub sigma: f64,
    pub delta_omega: f64,
}

impl OpticalParams {
    pub fn new(a1: f64, sigma: f64, delta_omega: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a1) {
            return Err(Error::InvalidParameter(format!("A1={a1} outside [0, 1]")));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma={sigma} must be non-negative")));
        }
        if !delta_omega.is_finite() {
            return Err(Error::InvalidParameter("delta_omega must be finite".into()));
        }
        Ok(OpticalParams { a1, sigma, delta_omega })
    }
}

/// `|κ(t)| = e^{−σ²t²/2} √(1 − 4A₁(1−A₁) sin²(t Δω))`.
pub fn kappa_magnitude(params: &OpticalParams, t: f64) -> f64 {
    let OpticalParams { a1, sigma, delta_omega } = *params;
    let s = (t * delta_omega).sin();
    let inner = (1.0 - 4.0 * a1 * (1.0 - a1) * s * s).max(0.0);
    (-0.5 * sigma * sigma * t * t).exp() * inner.sqrt()
}

fn check_kappa(kappa: Complex64) -> Result<()> {
    if kappa.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!("|kappa|={} exceeds 1", kappa.norm())));
    }
    Ok(())
}

/// Pure dephasing `diag(1, κ*, κ, 1)`.
pub fn optical_a(kappa: Complex64) -> Result<StochasticMap> {
    check_kappa(kappa)?;
    let one = Complex64::new(1.0, 0.0);
    StochasticMap::new(CMatrix::diag(&[one, kappa.conj(), kappa, one]))
}

pub fn optical_b(kappa: Complex64) -> Result<DynamicalMap> {
    Ok(optical_a(kappa)?.to_dynamical())
}

/// `(1 ± |κ₂/κ₁|, 0, 0)`, ascending.
pub fn optical_intermediate_eigs(k1: Complex64, k2: Complex64) -> Result<[f64; 4]> {
    if k1.norm() < ROOT_TOL {
        return Err(singular(k1.norm()));
    }
    let r = (k2 / k1).norm();
    Ok(sorted([0.0, 0.0, 1.0 - r, 1.0 + r]))
}

// ---------------------------------------------------------------- spin bath

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinBathParams {
    pub n: u32,
    pub coupling: f64,
}

impl SpinBathParams {
    pub fn new(n: u32, coupling: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("bath size N must be at least 1".into()));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidParameter("coupling A must be finite".into()));
        }
        Ok(SpinBathParams { n, coupling })
    }
}

/// Coherence factor `x(t) = cos^N(2At/√N)`.
pub fn spin_bath_x(params: &SpinBathParams, t: f64) -> f64 {
    let n = params.n as f64;
    (2.0 * params.coupling * t / n.sqrt()).cos().powi(params.n as i32)
}

/// `½(1−x)σz⊗σz + ½(1+x)I₄ = diag(1, x, x, 1)`.
pub fn spin_bath_a(x: f64) -> Result<StochasticMap> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("coherence factor x={x} outside [-1, 1]")));
    }
    StochasticMap::new(CMatrix::diag_real(&[1.0, x, x, 1.0]))
}

/// `(0, 0, 1 ± x₂/x₁)`, ascending.
pub fn spin_bath_intermediate_eigs(x1: f64, x2: f64) -> Result<[f64; 4]> {
    if x1.abs() < ROOT_TOL {
        return Err(singular(x1));
    }
    let r = x2 / x1;
    Ok(sorted([0.0, 0.0, 1.0 - r, 1.0 + r]))
}

// ---------------------------------------------------------------- two qubit

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoQubitParams {
    pub omega: f64,
}

impl TwoQubitParams {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega={omega} must be positive")));
        }
        Ok(TwoQubitParams { omega })
    }
}

/// `½(1+cos ωt)I₄ + ½(1−cos ωt)σz⊗σz = diag(1, cos ωt, cos ωt, 1)`.
pub fn two_qubit_a(params: &TwoQubitParams, t: f64) -> Result<StochasticMap> {
    let c = (params.omega * t).cos();
    StochasticMap::new(CMatrix::diag_real(&[1.0, c, c, 1.0]))
}

/// `(0, 0, 1 ± |cos ωt₂ / cos ωt₁|)`, ascending.
pub fn two_qubit_intermediate_eigs(t1: f64, t2: f64, omega: f64) -> Result<[f64; 4]> {
    let c1 = (omega * t1).cos();
    if c1.abs() < ROOT_TOL {
        return Err(singular(c1));
    }
    let r = ((omega * t2).cos() / c1).abs();
    Ok(sorted([0.0, 0.0, 1.0 - r, 1.0 + r]))
}

// ---------------------------------------------------------------- dispatch

/// One of the four models with its parameters fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    Werner(NoiseProfile),
    Optical(OpticalParams),
    SpinBath(SpinBathParams),
    TwoQubit(TwoQubitParams),
}

impl Model {
    pub fn id(&self) -> &'static str {
        match self {
            Model::Werner(_) => "werner",
            Model::Optical(_) => "optical",
            Model::SpinBath(_) => "spinbath",
            Model::TwoQubit(_) => "twoqubit",
        }
    }

    /// Numeric parameters in a fixed, model-specific order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            Model::Werner(p) => p.params(),
            Model::Optical(o) => vec![("A1", o.a1), ("sigma", o.sigma), ("delta_omega", o.delta_omega)],
            Model::SpinBath(s) => vec![("N", s.n as f64), ("A", s.coupling)],
            Model::TwoQubit(q) => vec![("omega", q.omega)],
        }
    }

    /// A(t, 0).
    pub fn a_map(&self, t: f64) -> Result<StochasticMap> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        match self {
            Model::Werner(profile) => werner_a(profile.eval(t)?),
            Model::Optical(o) => optical_a(Complex64::new(kappa_magnitude(o, t), 0.0)),
            Model::SpinBath(s) => spin_bath_a(spin_bath_x(s, t)),
            Model::TwoQubit(q) => two_qubit_a(q, t),
        }
    }

    /// Eigenvalues of B(t₂,t₁) from the model's closed form, ascending.
    pub fn closed_form_intermediate_eigs(&self, t1: f64, t2: f64) -> Result<[f64; 4]> {
        match self {
            Model::Werner(profile) => werner_intermediate_eigs(profile.eval(t1)?, profile.eval(t2)?),
            Model::Optical(o) => optical_intermediate_eigs(
                Complex64::new(kappa_magnitude(o, t1), 0.0),
                Complex64::new(kappa_magnitude(o, t2), 0.0),
            ),
            Model::SpinBath(s) => spin_bath_intermediate_eigs(spin_bath_x(s, t1), spin_bath_x(s, t2)),
            Model::TwoQubit(q) => two_qubit_intermediate_eigs(t1, t2, q.omega),
        }
    }

    /// Builds a model from its CLI/config keys.
    ///
    /// | model      | keys (defaults)                                   |
    /// |------------|---------------------------------------------------|
    /// | `werner`   | `profile` (`cos2m`), `M` (1), `a` (1), `alpha` (1), `beta` (2) |
    /// | `optical`  | `A1` (0.5), `sigma` (0), `delta_omega` (1)        |
    /// | `spinbath` | `N` (4), `A` (1)                                  |
    /// | `twoqubit` | `omega` (1)                                       |
    ///
    /// Keys that do not belong to the model (or its Werner profile family)
    /// are rejected.
    pub fn from_params(id: &str, profile: Option<&str>, params: &BTreeMap<String, f64>) -> Result<Model> {
        let allowed: &[&str] = match (id, profile.unwrap_or("cos2m")) {
            ("werner", "cos2m") => &["M", "a"],
            ("werner", "exp") => &["alpha"],
            ("werner", "stretched") => &["alpha", "beta"],
            ("werner", other) => {
                return Err(Error::InvalidParameter(format!(
                    "unknown profile '{other}' (expected cos2m, exp or stretched)"
                )))
            }
            ("optical", _) => &["A1", "sigma", "delta_omega"],
            ("spinbath", _) => &["N", "A"],
            ("twoqubit", _) => &["omega"],
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown model '{id}' (expected werner, optical, spinbath or twoqubit)"
                )))
            }
        };
        if id != "werner" && profile.is_some() {
            return Err(Error::InvalidParameter(format!("model '{id}' takes no profile")));
        }
        if let Some(key) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!("unknown parameter '{key}' for {id}")));
        }
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        let positive_int = |k: &str, default: f64| -> Result<u32> {
            let v = get(k, default);
            if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
                return Err(Error::InvalidParameter(format!("{k} must be a positive integer, got {v}")));
            }
            Ok(v as u32)
        };
        Ok(match id {
            "werner" => Model::Werner(match profile.unwrap_or("cos2m") {
                "cos2m" => NoiseProfile::cos_pow_2m(positive_int("M", 1.0)?, get("a", 1.0))?,
                "exp" => NoiseProfile::exp(get("alpha", 1.0))?,
                _ => NoiseProfile::stretched_exp(get("alpha", 1.0), get("beta", 2.0))?,
            }),
            "optical" => Model::Optical(OpticalParams::new(get("A1", 0.5), get("sigma", 0.0), get("delta_omega", 1.0))?),
            "spinbath" => Model::SpinBath(SpinBathParams::new(positive_int("N", 4.0)?, get("A", 1.0))?),
            _ => Model::TwoQubit(TwoQubitParams::new(get("omega", 1.0))?),
        })
    }
}
