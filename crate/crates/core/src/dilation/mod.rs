//! System–environment realizations of the qubit models.
//!
//! Each evolver computes `Tr_E[U (ρ ⊗ ρ_E) U†]` (or an equivalent closed
//! sum) directly, with no reference to the model's A-map, so that
//! [`extract_a_map`] can check the closed forms in [`crate::models`].

mod checks;
mod quadrature;

pub use checks::{all_checks, optical_check, spin_bath_check, spin_bath_dense_check, two_qubit_check, OracleCheck};
pub use quadrature::adaptive_simpson;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::dynmaps::StochasticMap;
use crate::error::{Error, Result};
use crate::models::{SpinBathParams, TwoQubitParams};
use crate::tensor::{kron, partial_trace, pauli, unitary_from_hamiltonian, CMatrix, Subsystem};

/// Largest bath handled by the binomial-sum evolver.
pub const MAX_BINOMIAL_BATH: u32 = 64;
/// Largest bath handled by the dense evolver (joint dimension 2^(N+1)).
pub const MAX_DENSE_BATH: u32 = 10;
/// Residual above which [`extract_a_map`] reports a nonlinear evolver.
pub const LINEARITY_TOL: f64 = 1e-8;

const QUADRATURE_TOL: f64 = 1e-9;
const WINDOW_SIGMAS: f64 = 8.0;

fn check_qubit(rho: &CMatrix) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a qubit operator, got {0}x{0}", rho.dim())));
    }
    Ok(())
}

/// Spin-bath evolution with the bath in `I/2^N`, summed over magnetization
/// sectors: `Σσ_kz = N − 2k` with weight `C(N,k)/2^N`.
pub fn spin_bath_evolve(params: &SpinBathParams, t: f64, rho: &CMatrix) -> Result<CMatrix> {
    check_qubit(rho)?;
    let n = params.n;
    if n > MAX_BINOMIAL_BATH {
        return Err(Error::SizeCap(format!("binomial bath size {n} exceeds {MAX_BINOMIAL_BATH}")));
    }
    let scale = 2.0 * params.coupling * t / (n as f64).sqrt();
    let mut weight = 0.5f64.powi(n as i32);
    let mut factor = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let m = n as f64 - 2.0 * k as f64;
        factor += Complex64::from_polar(weight, -scale * m);
        weight *= (n - k) as f64 / (k + 1) as f64;
    }
    let mut out = rho.clone();
    out[(0, 1)] *= factor;
    out[(1, 0)] *= factor.conj();
    Ok(out)
}

/// Full Hamiltonian `H = (A/√N) σz ⊗ Σ_k σ_kz`, system first.
pub fn spin_bath_hamiltonian(params: &SpinBathParams) -> Result<CMatrix> {
    let n = params.n;
    if n > MAX_DENSE_BATH {
        return Err(Error::SizeCap(format!("dense bath size {n} exceeds {MAX_DENSE_BATH}")));
    }
    let bath_dim = 1usize << n;
    let mut bath_z = CMatrix::zeros(bath_dim);
    for k in 0..n {
        let left = CMatrix::identity(1 << k);
        let right = CMatrix::identity(1 << (n - k - 1));
        bath_z = &bath_z + &kron(&kron(&left, &pauli::z()), &right);
    }
    Ok(kron(&pauli::z(), &bath_z).scale_real(params.coupling / (n as f64).sqrt()))
}

/// Spin-bath evolution by exponentiating the full `2^(N+1)`-dimensional
/// Hamiltonian and tracing out the bath.
pub fn spin_bath_evolve_dense(params: &SpinBathParams, t: f64, rho: &CMatrix) -> Result<CMatrix> {
    check_qubit(rho)?;
    let h = spin_bath_hamiltonian(params)?;
    let bath_dim = 1usize << params.n;
    let u = unitary_from_hamiltonian(&h, t)?;
    let joint = kron(rho, &CMatrix::identity(bath_dim).scale_real(1.0 / bath_dim as f64));
    let evolved = u.matmul(&joint)?.matmul(&u.adjoint())?;
    partial_trace(&evolved, 2, bath_dim, Subsystem::Second)
}

/// `U(t) = exp(−i (ω/2) σz⊗σx t) = cos(ωt/2) I − i sin(ωt/2) σz⊗σx`.
pub fn two_qubit_unitary(params: &TwoQubitParams, t: f64) -> Result<CMatrix> {
    let h = kron(&pauli::z(), &pauli::x()).scale_real(params.omega / 2.0);
    unitary_from_hamiltonian(&h, t)
}

/// `Tr_E[U (ρ_S ⊗ ρ_E) U†]` for the two-qubit model.
pub fn two_qubit_evolve(params: &TwoQubitParams, t: f64, rho_s: &CMatrix, rho_e: &CMatrix) -> Result<CMatrix> {
    check_qubit(rho_s)?;
    check_qubit(rho_e)?;
    let u = two_qubit_unitary(params, t)?;
    let evolved = u.matmul(&kron(rho_s, rho_e))?.matmul(&u.adjoint())?;
    partial_trace(&evolved, 2, 2, Subsystem::Second)
}

/// `κ(t) = ∫ G(ω) e^{−iωt} dω` for the two-peak spectrum
/// `G = A₁·N(ω₁, σ) + (1−A₁)·N(ω₂, σ)`.
///
/// Each Gaussian is integrated over `μ ± 8σ`; `σ = 0` collapses to the
/// two-phasor sum.
pub fn optical_kappa_integral(a1: f64, omega1: f64, omega2: f64, sigma: f64, t: f64) -> Complex64 {
    let peak = |mu: f64| -> Complex64 {
        if sigma == 0.0 {
            return Complex64::from_polar(1.0, -mu * t);
        }
        let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        let f = |w: f64| {
            let z = (w - mu) / sigma;
            Complex64::from_polar(norm * (-0.5 * z * z).exp(), -w * t)
        };
        let half = WINDOW_SIGMAS * sigma;
        // enough panels to resolve the oscillation across the window
        let panels = 8 + (2.0 * half * t.abs() / std::f64::consts::PI).ceil() as usize;
        adaptive_simpson(&f, mu - half, mu + half, QUADRATURE_TOL, panels)
    };
    peak(omega1) * a1 + peak(omega2) * (1.0 - a1)
}

/// A random density matrix `GG†/tr(GG†)` with uniform complex entries.
pub fn random_density_matrix(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = g.matmul(&g.adjoint()).expect("square");
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

#[derive(Debug, Clone)]
pub struct TomographyResult {
    pub a_map: StochasticMap,
    /// Worst deviation between `A·vec(ρ)` and the evolver on random states.
    pub residual: f64,
}

const PROBE_STATES: usize = 10;
const PROBE_SEED: u64 = 0x5eed;

/// Reads off the A-map of a linear evolver from its response to the `d²`
/// matrix units: column `(a₁,a₂)` of A is `vec(evolver(E_{a₁a₂}))`.
pub fn extract_a_map<F>(evolver: F, d: usize) -> Result<TomographyResult>
where
    F: Fn(&CMatrix) -> Result<CMatrix>,
{
    let mut a = CMatrix::zeros(d * d);
    for a1 in 0..d {
        for a2 in 0..d {
            let out = evolver(&CMatrix::unit(d, a1, a2))?;
            if out.dim() != d {
                return Err(Error::DimensionMismatch(format!("evolver returned {0}x{0}, expected {d}x{d}", out.dim())));
            }
            for b1 in 0..d {
                for b2 in 0..d {
                    a[(b1 * d + b2, a1 * d + a2)] = out[(b1, b2)];
                }
            }
        }
    }
    let a_map = StochasticMap::new(a)?;

    let mut rng = StdRng::seed_from_u64(PROBE_SEED);
    let mut residual: f64 = 0.0;
    for _ in 0..PROBE_STATES {
        let rho = random_density_matrix(d, &mut rng);
        residual = residual.max(a_map.apply(&rho)?.max_abs_diff(&evolver(&rho)?));
    }
    if residual > LINEARITY_TOL {
        return Err(Error::Nonlinear { residual });
    }
    Ok(TomographyResult { a_map, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{kappa_magnitude, spin_bath_a, spin_bath_x, two_qubit_a, OpticalParams};
    use std::f64::consts::PI;

    fn plus_state() -> CMatrix {
        CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap()
    }

    #[test]
    fn spin_bath_binomial_examples() {
        let p = SpinBathParams::new(3, 0.7).unwrap();
        let rho = plus_state();
        assert!(spin_bath_evolve(&p, 0.0, &rho).unwrap().max_abs_diff(&rho) < 1e-15);

        let p1 = SpinBathParams::new(1, 0.9).unwrap();
        let out = spin_bath_evolve(&p1, 0.4, &rho).unwrap();
        assert!((out[(0, 1)] - Complex64::new(0.5 * (2.0 * 0.9 * 0.4f64).cos(), 0.0)).norm() < 1e-15);

        let p4 = SpinBathParams::new(4, 1.0).unwrap();
        let out = spin_bath_evolve(&p4, 0.3, &CMatrix::unit(2, 0, 1)).unwrap();
        assert!((out[(0, 1)].re - 0.83296).abs() < 1e-5);
        assert!(out[(0, 1)].im.abs() < 1e-15);
        assert!((out[(0, 1)].re - spin_bath_x(&p4, 0.3)).abs() < 1e-14);

        let big = SpinBathParams::new(65, 1.0).unwrap();
        assert!(matches!(spin_bath_evolve(&big, 0.1, &rho), Err(Error::SizeCap(_))));
    }

    #[test]
    fn spin_bath_dense_agrees_with_binomial() {
        let rho = random_density_matrix(2, &mut StdRng::seed_from_u64(1));
        for n in [1, 2, 4] {
            let p = SpinBathParams::new(n, 1.0).unwrap();
            assert!(spin_bath_evolve_dense(&p, 0.0, &rho).unwrap().max_abs_diff(&rho) < 1e-14);
            for t in [0.3, 1.1, 2.5] {
                let dense = spin_bath_evolve_dense(&p, t, &rho).unwrap();
                let sum = spin_bath_evolve(&p, t, &rho).unwrap();
                assert!(dense.max_abs_diff(&sum) < 1e-12, "N={n} t={t}");
            }
        }
        let big = SpinBathParams::new(11, 1.0).unwrap();
        assert!(matches!(spin_bath_evolve_dense(&big, 0.1, &rho), Err(Error::SizeCap(_))));
    }

    #[test]
    fn two_qubit_examples() {
        let q = TwoQubitParams::new(1.0).unwrap();
        let rho_e = CMatrix::diag_real(&[1.0, 0.0]);
        let rho = plus_state();
        assert!(two_qubit_evolve(&q, 0.0, &rho, &rho_e).unwrap().max_abs_diff(&rho) < 1e-14);

        // direct 4x4 conjugation with U = −i σz⊗σx at ωt = π
        let u = kron(&pauli::z(), &pauli::x()).scale(Complex64::new(0.0, -1.0));
        let direct = partial_trace(&(&(&u * &kron(&rho, &rho_e)) * &u.adjoint()), 2, 2, Subsystem::Second).unwrap();
        let minus = CMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!(direct.max_abs_diff(&minus) < 1e-15);
        assert!(two_qubit_evolve(&q, PI, &rho, &rho_e).unwrap().max_abs_diff(&minus) < 1e-12);

        let out = two_qubit_evolve(&q, PI / 2.0, &random_density_matrix(2, &mut StdRng::seed_from_u64(5)), &rho_e)
            .unwrap();
        assert!(out[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn two_qubit_unitary_matches_expansion() {
        let q = TwoQubitParams::new(1.7).unwrap();
        let t: f64 = 0.9;
        let zx = kron(&pauli::z(), &pauli::x());
        let half: f64 = 1.7 * t / 2.0;
        let expect = &CMatrix::identity(4).scale_real(half.cos()) - &zx.scale(Complex64::new(0.0, half.sin()));
        assert!(two_qubit_unitary(&q, t).unwrap().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn kappa_integral_examples() {
        assert!((optical_kappa_integral(0.3, 1.0, -1.0, 0.2, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        let (a1, w1, w2, t) = (0.3, 1.4, -0.2, 2.1);
        let expect = Complex64::from_polar(a1, -w1 * t) + Complex64::from_polar(1.0 - a1, -w2 * t);
        assert!((optical_kappa_integral(a1, w1, w2, 0.0, t) - expect).norm() < 1e-15);

        let k = optical_kappa_integral(0.3, 1.0, -1.0, 0.2, 0.7);
        let closed = kappa_magnitude(&OpticalParams::new(0.3, 0.2, 1.0).unwrap(), 0.7);
        assert!((k.norm() - closed).abs() < 1e-6);
    }

    #[test]
    fn tomography_examples() {
        let r = extract_a_map(|rho: &CMatrix| Ok(rho.clone()), 3).unwrap();
        assert_eq!(r.a_map, StochasticMap::identity(3));
        assert!(r.residual < 1e-15);

        let p4 = SpinBathParams::new(4, 1.0).unwrap();
        let r = extract_a_map(|rho: &CMatrix| spin_bath_evolve(&p4, 0.3, rho), 2).unwrap();
        assert!(r.a_map.matrix().max_abs_diff(spin_bath_a(spin_bath_x(&p4, 0.3)).unwrap().matrix()) < 1e-14);
        assert!((r.a_map.matrix()[(1, 1)].re - 0.83296).abs() < 1e-5);

        let q = TwoQubitParams::new(1.0).unwrap();
        // any diagonal environment gives the same map
        let rho_e = CMatrix::diag_real(&[0.7, 0.3]);
        let r = extract_a_map(|rho: &CMatrix| two_qubit_evolve(&q, 1.0, rho, &rho_e), 2).unwrap();
        assert!(r.a_map.matrix().max_abs_diff(two_qubit_a(&q, 1.0).unwrap().matrix()) < 1e-12);
        assert!((r.a_map.matrix()[(1, 1)].re - 0.54030).abs() < 1e-5);

        // a state-dependent evolver is caught
        let err = extract_a_map(|rho: &CMatrix| Ok(rho.scale(rho[(0, 0)])), 2).unwrap_err();
        assert!(matches!(err, Error::Nonlinear { .. }));
    }
}
