//! Regime scans over `(t₁, μ = t₂/t₁)`: intermediate-map spectra, CP/NCP
//! transition points, and Werner concurrence trajectories.

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::dynmaps::{concurrence, default_cp_tolerance, intermediate, jamiolkowski_state, Verdict};
use crate::error::{Error, Result};
use crate::models::{werner_a, Model, NoiseProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVerdict {
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "NCP")]
    Ncp,
    Singular,
}

impl SweepVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVerdict::Cp => "CP",
            SweepVerdict::Ncp => "NCP",
            SweepVerdict::Singular => "Singular",
        }
    }
}

impl From<Verdict> for SweepVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Cp => SweepVerdict::Cp,
            Verdict::Ncp => SweepVerdict::Ncp,
        }
    }
}

fn ordered_map<S: Serializer>(params: &[(&'static str, f64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(params.len()))?;
    for (k, v) in params {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

/// One grid point of a sweep. Singular points carry no spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub model: &'static str,
    #[serde(serialize_with = "ordered_map")]
    pub params: Vec<(&'static str, f64)>,
    pub t1: f64,
    pub t2: f64,
    pub mu: f64,
    /// Choi spectrum of `A(t₂,t₁)`, ascending.
    pub eigenvalues: Option<[f64; 4]>,
    pub lambda_min: Option<f64>,
    pub verdict: SweepVerdict,
    /// Concurrence of the intermediate map's Jamiolkowski state, when CP.
    pub concurrence: Option<f64>,
}

/// Full pipeline at one `(t₁, t₂)`: build both maps, invert, compose,
/// realign, eigensolve.
pub fn evaluate(model: &Model, t1: f64, t2: f64, tolerance: f64) -> Result<SweepRecord> {
    let mut record = SweepRecord {
        model: model.id(),
        params: model.params(),
        t1,
        t2,
        mu: t2 / t1,
        eigenvalues: None,
        lambda_min: None,
        verdict: SweepVerdict::Singular,
        concurrence: None,
    };
    let a = match intermediate(&model.a_map(t2)?, &model.a_map(t1)?) {
        Ok(a) => a,
        Err(Error::Singular { .. }) => return Ok(record),
        Err(e) => return Err(e),
    };
    let report = a.to_dynamical().cp_classify(tolerance)?;
    let eigs: [f64; 4] = report
        .eigenvalues
        .as_slice()
        .try_into()
        .map_err(|_| Error::DimensionMismatch("sweeps are defined for qubit maps".into()))?;
    record.eigenvalues = Some(eigs);
    record.lambda_min = Some(eigs[0]);
    record.verdict = report.verdict.into();
    if report.is_cp() {
        record.concurrence = Some(concurrence(&jamiolkowski_state(&a)?.matrix)?);
    }
    Ok(record)
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(format!("{name} grid must be finite and strictly ascending")));
    }
    Ok(())
}

/// Evaluates every `(model, t₁, μ)` combination. Rows come back in grid
/// order (models outermost, μ innermost) regardless of scheduling.
pub fn run_sweep(models: &[Model], t1_grid: &[f64], mu_grid: &[f64], tolerance: Option<f64>) -> Result<Vec<SweepRecord>> {
    if models.is_empty() {
        return Err(Error::InvalidParameter("no models to sweep".into()));
    }
    check_grid("t1", t1_grid)?;
    check_grid("mu", mu_grid)?;
    if t1_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter("t1 must be positive".into()));
    }
    if mu_grid[0] <= 1.0 {
        return Err(Error::InvalidParameter("mu must exceed 1".into()));
    }
    let tol = tolerance.unwrap_or_else(|| default_cp_tolerance(2));
    let points: Vec<(&Model, f64, f64)> = models
        .iter()
        .flat_map(|m| t1_grid.iter().flat_map(move |&t1| mu_grid.iter().map(move |&mu| (m, t1, mu))))
        .collect();
    points.into_par_iter().map(|(m, t1, mu)| evaluate(m, t1, mu * t1, tol)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    #[serde(rename = "toNCP")]
    ToNcp,
    #[serde(rename = "toCP")]
    ToCp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionPoint {
    pub mu_star: f64,
    pub direction: Direction,
    /// Half-width of the final bracket around `mu_star`.
    pub bracket_width: f64,
}

/// Relative bracket width at which bisection stops.
pub const BISECTION_REL_WIDTH: f64 = 1e-8;

/// Scans `λ_min(μ)` on `[mu_lo, mu_hi]` at `step`, then bisects every
/// CP/NCP change down to a bracket of `1e-8·μ`. Brackets never span a
/// singular grid point.
pub fn find_transitions(
    model: &Model,
    t1: f64,
    mu_lo: f64,
    mu_hi: f64,
    step: f64,
    tolerance: Option<f64>,
) -> Result<Vec<TransitionPoint>> {
    if !(t1 > 0.0) || !(mu_lo > 1.0) || !(mu_hi > mu_lo) || !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need t1 > 0, 1 < mu_lo < mu_hi and step > 0 (t1={t1}, mu=[{mu_lo}, {mu_hi}], step={step})"
        )));
    }
    let tol = tolerance.unwrap_or_else(|| default_cp_tolerance(2));
    // None for singular points, Some(is_ncp) otherwise
    let ncp = |mu: f64| -> Result<Option<bool>> {
        Ok(evaluate(model, t1, mu * t1, tol)?.lambda_min.map(|l| l < -tol))
    };

    let n = ((mu_hi - mu_lo) / step).floor() as usize;
    let mut mus: Vec<f64> = (0..=n).map(|k| mu_lo + k as f64 * step).collect();
    if mu_hi - mus[n] > 1e-12 * mu_hi {
        mus.push(mu_hi);
    }
    let states = mus.par_iter().map(|&mu| ncp(mu)).collect::<Result<Vec<_>>>()?;

    let mut out = Vec::new();
    for k in 1..mus.len() {
        let (Some(left), Some(right)) = (states[k - 1], states[k]) else { continue };
        if left == right {
            continue;
        }
        let (mut lo, mut hi) = (mus[k - 1], mus[k]);
        while hi - lo > BISECTION_REL_WIDTH * lo {
            let mid = 0.5 * (lo + hi);
            match ncp(mid)? {
                Some(s) if s == left => lo = mid,
                Some(_) => hi = mid,
                None => break,
            }
        }
        out.push(TransitionPoint {
            mu_star: 0.5 * (lo + hi),
            direction: if right { Direction::ToNcp } else { Direction::ToCp },
            bracket_width: 0.5 * (hi - lo),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrencePoint {
    pub t: f64,
    pub p: f64,
    pub concurrence: f64,
}

/// Concurrence of the Werner map's Jamiolkowski state along `t_grid`.
pub fn concurrence_trajectory(profile: &NoiseProfile, t_grid: &[f64]) -> Result<Vec<ConcurrencePoint>> {
    check_grid("t", t_grid)?;
    if t_grid[0] < 0.0 {
        return Err(Error::NegativeTime(t_grid[0]));
    }
    t_grid
        .iter()
        .map(|&t| {
            let p = profile.eval(t)?;
            let state = jamiolkowski_state(&werner_a(p)?)?;
            Ok(ConcurrencePoint { t, p, concurrence: concurrence(&state.matrix)? })
        })
        .collect()
}
