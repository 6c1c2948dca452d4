use serde::Serialize;

use crate::error::{Error, Result};

/// Time-dependent noise parameter `p(t) ∈ [0, 1]` of the Werner model.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NoiseProfile {
    /// `cos^{2M}(a t)`.
    CosPow2M { m: u32, a: f64 },
    /// `exp(-α t)`.
    Exp { alpha: f64 },
    /// `exp(-α t^β)`.
    StretchedExp { alpha: f64, beta: f64 },
    /// Piecewise-linear through `(t, p)` samples, held constant past the last one.
    Table { samples: Vec<(f64, f64)> },
}

impl NoiseProfile {
    pub fn cos_pow_2m(m: u32, a: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("M must be at least 1".into()));
        }
        finite("a", a)?;
        Ok(NoiseProfile::CosPow2M { m, a })
    }

    pub fn exp(alpha: f64) -> Result<Self> {
        non_negative("alpha", alpha)?;
        Ok(NoiseProfile::Exp { alpha })
    }

    pub fn stretched_exp(alpha: f64, beta: f64) -> Result<Self> {
        non_negative("alpha", alpha)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(NoiseProfile::StretchedExp { alpha, beta })
    }

    pub fn table(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.first() != Some(&(0.0, 1.0)) {
            return Err(Error::InvalidParameter("table must start at (0, 1)".into()));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter("table times must be strictly ascending".into()));
        }
        if samples.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter("table values must lie in [0, 1]".into()));
        }
        Ok(NoiseProfile::Table { samples })
    }

    pub fn family(&self) -> &'static str {
        match self {
            NoiseProfile::CosPow2M { .. } => "cos2m",
            NoiseProfile::Exp { .. } => "exp",
            NoiseProfile::StretchedExp { .. } => "stretched",
            NoiseProfile::Table { .. } => "table",
        }
    }

    /// Numeric parameters in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            NoiseProfile::CosPow2M { m, a } => vec![("M", m as f64), ("a", a)],
            NoiseProfile::Exp { alpha } => vec![("alpha", alpha)],
            NoiseProfile::StretchedExp { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            NoiseProfile::Table { .. } => vec![],
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        Ok(match self {
            NoiseProfile::CosPow2M { m, a } => (a * t).cos().powi(2 * *m as i32),
            NoiseProfile::Exp { alpha } => (-alpha * t).exp(),
            NoiseProfile::StretchedExp { alpha, beta } => (-alpha * t.powf(*beta)).exp(),
            NoiseProfile::Table { samples } => interpolate(samples, t),
        })
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    match samples.iter().position(|&(ts, _)| ts >= t) {
        None => samples[samples.len() - 1].1,
        Some(0) => samples[0].1,
        Some(i) => {
            let (t0, p0) = samples[i - 1];
            let (t1, p1) = samples[i];
            p0 + (p1 - p0) * (t - t0) / (t1 - t0)
        }
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite")))
    }
}

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be non-negative, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn profile_values() {
        assert_eq!(NoiseProfile::exp(2.0).unwrap().eval(0.0).unwrap(), 1.0);
        let cos = NoiseProfile::cos_pow_2m(1, 1.0).unwrap();
        assert!((cos.eval(PI).unwrap() - 1.0).abs() < 1e-15);
        let st = NoiseProfile::stretched_exp(1.0, 2.0).unwrap();
        assert!((st.eval(1.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!(matches!(cos.eval(-0.1), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn table_interpolates() {
        let t = NoiseProfile::table(vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.9)]).unwrap();
        assert_eq!(t.eval(0.0).unwrap(), 1.0);
        assert!((t.eval(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!((t.eval(1.5).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(t.eval(5.0).unwrap(), 0.9);
        assert!(NoiseProfile::table(vec![(0.0, 0.8)]).is_err());
        assert!(NoiseProfile::table(vec![(0.0, 1.0), (1.0, 1.5)]).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NoiseProfile::cos_pow_2m(0, 1.0).is_err());
        assert!(NoiseProfile::exp(-1.0).is_err());
        assert!(NoiseProfile::stretched_exp(1.0, 0.0).is_err());
    }

    #[test]
    fn built_ins_stay_in_unit_interval() {
        let profiles = [
            NoiseProfile::cos_pow_2m(3, 1.7).unwrap(),
            NoiseProfile::exp(0.4).unwrap(),
            NoiseProfile::stretched_exp(0.4, 0.5).unwrap(),
        ];
        for p in &profiles {
            for k in 0..500 {
                let v = p.eval(k as f64 * 0.037).unwrap();
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
