//! Fixed grids comparing the dilation evolvers against the closed-form maps.

use serde::Serialize;

use super::{extract_a_map, optical_kappa_integral, spin_bath_evolve, spin_bath_evolve_dense, two_qubit_evolve};
use crate::dynmaps::StochasticMap;
use crate::error::Result;
use crate::models::{kappa_magnitude, spin_bath_a, spin_bath_x, two_qubit_a, OpticalParams, SpinBathParams, TwoQubitParams};
use crate::tensor::CMatrix;

/// Largest constraint violation tolerated on an extracted A-map.
pub const EXTRACTED_CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: &'static str,
    pub points: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Worst trace-preservation/hermiticity error over extracted maps, if any were extracted.
    pub max_constraint_violation: Option<f64>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
            && self.max_constraint_violation.is_none_or(|v| v <= EXTRACTED_CONSTRAINT_TOL)
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

fn constraint_error(a: &StochasticMap) -> f64 {
    a.validate().violations.iter().map(|v| v.magnitude).fold(0.0, f64::max)
}

/// Binomial-sum spin bath vs `diag(1, x, x, 1)`: 50 times × N ∈ {1, 2, 4, 8}.
pub fn spin_bath_check() -> Result<OracleCheck> {
    let mut dev: f64 = 0.0;
    let mut viol: f64 = 0.0;
    let mut points = 0;
    for n in [1, 2, 4, 8] {
        let p = SpinBathParams::new(n, 1.0)?;
        for t in grid(0.0, 3.0, 50) {
            let r = extract_a_map(|rho: &CMatrix| spin_bath_evolve(&p, t, rho), 2)?;
            let closed = spin_bath_a(spin_bath_x(&p, t))?;
            dev = dev.max(r.a_map.matrix().max_abs_diff(closed.matrix()));
            viol = viol.max(constraint_error(&r.a_map));
            points += 1;
        }
    }
    Ok(OracleCheck { name: "spinbath", points, max_deviation: dev, tolerance: 1e-10, max_constraint_violation: Some(viol) })
}

/// Dense Hamiltonian path vs binomial sum on all matrix units, N = 1..=10.
pub fn spin_bath_dense_check() -> Result<OracleCheck> {
    let mut dev: f64 = 0.0;
    let mut points = 0;
    for n in 1..=10 {
        let p = SpinBathParams::new(n, 1.0)?;
        for t in [0.3, 1.7] {
            for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let e = CMatrix::unit(2, i, j);
                let dense = spin_bath_evolve_dense(&p, t, &e)?;
                dev = dev.max(dense.max_abs_diff(&spin_bath_evolve(&p, t, &e)?));
            }
            points += 1;
        }
    }
    Ok(OracleCheck { name: "spinbath-dense", points, max_deviation: dev, tolerance: 1e-12, max_constraint_violation: None })
}

/// Two-qubit unitary with the environment in `|0⟩⟨0|` vs `diag(1, cos ωt, cos ωt, 1)`.
pub fn two_qubit_check() -> Result<OracleCheck> {
    let q = TwoQubitParams::new(1.0)?;
    let rho_e = CMatrix::diag_real(&[1.0, 0.0]);
    let mut dev: f64 = 0.0;
    let mut viol: f64 = 0.0;
    let mut points = 0;
    for t in grid(0.0, 2.0 * std::f64::consts::PI, 50) {
        let r = extract_a_map(|rho: &CMatrix| two_qubit_evolve(&q, t, rho, &rho_e), 2)?;
        dev = dev.max(r.a_map.matrix().max_abs_diff(two_qubit_a(&q, t)?.matrix()));
        viol = viol.max(constraint_error(&r.a_map));
        points += 1;
    }
    Ok(OracleCheck { name: "twoqubit", points, max_deviation: dev, tolerance: 1e-10, max_constraint_violation: Some(viol) })
}

/// Spectral integral vs `|κ|` closed form: 5 A₁ × 5 t × σ ∈ {0, 0.2}.
pub fn optical_check() -> Result<OracleCheck> {
    // Δω = (ω₁ − ω₂)/2 = 1; the mean frequency only contributes a phase.
    let (w1, w2) = (1.5, -0.5);
    let mut dev: f64 = 0.0;
    let mut points = 0;
    for sigma in [0.0, 0.2] {
        for a1 in grid(0.0, 1.0, 5) {
            let params = OpticalParams::new(a1, sigma, (w1 - w2) / 2.0)?;
            for t in grid(0.1, 3.0, 5) {
                let k = optical_kappa_integral(a1, w1, w2, sigma, t);
                dev = dev.max((k.norm() - kappa_magnitude(&params, t)).abs());
                points += 1;
            }
        }
    }
    Ok(OracleCheck { name: "optical", points, max_deviation: dev, tolerance: 1e-6, max_constraint_violation: None })
}

pub fn all_checks() -> Result<Vec<OracleCheck>> {
    Ok(vec![spin_bath_check()?, spin_bath_dense_check()?, two_qubit_check()?, optical_check()?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_pass() {
        for c in [spin_bath_check(), two_qubit_check(), optical_check()] {
            let c = c.unwrap();
            assert!(c.passed(), "{c:?}");
            assert_eq!(c.points, if c.name == "spinbath" { 200 } else { 50 });
        }
    }

    #[test]
    fn dense_path_small_baths() {
        let mut dev: f64 = 0.0;
        for n in 1..=6 {
            let p = SpinBathParams::new(n, 0.8).unwrap();
            let e = CMatrix::unit(2, 0, 1);
            dev = dev.max(spin_bath_evolve_dense(&p, 0.9, &e).unwrap().max_abs_diff(&spin_bath_evolve(&p, 0.9, &e).unwrap()));
        }
        assert!(dev < 1e-12, "{dev}");
    }
}
