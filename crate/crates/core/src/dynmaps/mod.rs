//! Stochastic (A) and dynamical (B) forms of a quantum map on a
//! `d`-dimensional system.
//!
//! With the row-major vectorization `vec(ρ)[a₁·d + a₂] = ρ[a₁,a₂]`:
//!
//! ```text
//! vec(ρ') = A · vec(ρ)
//! ρ'[b₁,b₂] = Σ B[(b₁,a₁),(b₂,a₂)] ρ[a₁,a₂]
//! B[(b₁,a₁),(b₂,a₂)] = A[(b₁,b₂),(a₁,a₂)]
//! ```
//!
//! A-maps compose by matrix multiplication. The B form is the Choi matrix:
//! Hermitian, trace `d`, and positive semidefinite exactly when the map is
//! completely positive.

mod concurrence;
mod format;
mod kraus;

pub use concurrence::concurrence;
pub use format::{MapFile, MapKind};
pub use kraus::{kraus_from_choi, KrausSet};

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{self, hermitian_eig, partial_trace, realign, CMatrix, Subsystem};

/// Tolerance for the trace/hermiticity constraints on A and B.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Default CP tolerance: `1e-9 · d`.
pub fn default_cp_tolerance(d: usize) -> f64 {
    1e-9 * d as f64
}

/// Unit-trace Hermitian positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if dev > CONSTRAINT_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > CONSTRAINT_TOL {
            return Err(Error::InvalidParameter(format!("density matrix trace {tr} != 1")));
        }
        let min = hermitian_eig(&m)?.min();
        if min < -CONSTRAINT_TOL {
            return Err(Error::InvalidParameter(format!("density matrix has eigenvalue {min:.3e} < 0")));
        }
        Ok(DensityMatrix(m))
    }

    /// `(I + r·σ) / 2` for a Bloch vector with `|r| ≤ 1`.
    pub fn qubit(rx: f64, ry: f64, rz: f64) -> Result<Self> {
        use tensor::pauli;
        let m = &(&(&pauli::id2() + &pauli::x().scale_real(rx)) + &pauli::y().scale_real(ry))
            + &pauli::z().scale_real(rz);
        Self::new(m.scale_real(0.5))
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&v, &v)?)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(CMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}

impl AsRef<CMatrix> for DensityMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

fn vec_of(m: &CMatrix) -> Vec<Complex64> {
    m.as_slice().to_vec()
}

fn unvec(d: usize, v: Vec<Complex64>) -> CMatrix {
    CMatrix::from_vec(d, v).expect("d² entries")
}

fn system_dim(m: &CMatrix) -> Result<usize> {
    m.is_square_of().ok_or(Error::NotPerfectSquare(m.dim()))
}

/// A-form of a map: `d² × d²`, acting on `vec(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMap {
    d: usize,
    matrix: CMatrix,
}

/// B-form (Choi matrix) of a map. Not required to be positive: intermediate
/// maps can carry negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalMap {
    d: usize,
    matrix: CMatrix,
}

/// One violated constraint and its worst-case magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    TracePreservation,
    Hermiticity,
    Trace,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::TracePreservation => "trace preservation",
            Constraint::Hermiticity => "hermiticity",
            Constraint::Trace => "trace",
        })
    }
}

/// Outcome of a constraint check; empty means the map is valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, constraint: Constraint, magnitude: f64) {
        if magnitude > CONSTRAINT_TOL || magnitude.is_nan() {
            self.violations.push(Violation { constraint, magnitude });
        }
    }
}

impl StochasticMap {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = system_dim(&matrix)?;
        Ok(StochasticMap { d, matrix })
    }

    pub fn identity(d: usize) -> Self {
        StochasticMap { d, matrix: CMatrix::identity(d * d) }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Largest violation of `Σ_b A[(b,b),(a₁,a₂)] = δ_{a₁a₂}`.
    pub fn trace_preservation_error(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for a1 in 0..d {
            for a2 in 0..d {
                let s: Complex64 = (0..d).map(|b| self.matrix[(b * d + b, a1 * d + a2)]).sum();
                let target = if a1 == a2 { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// Largest violation of `A[(b₁,b₂),(a₁,a₂)] = conj(A[(b₂,b₁),(a₂,a₁)])`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for b1 in 0..d {
            for b2 in 0..d {
                for a1 in 0..d {
                    for a2 in 0..d {
                        let x = self.matrix[(b1 * d + b2, a1 * d + a2)];
                        let y = self.matrix[(b2 * d + b1, a2 * d + a1)];
                        worst = worst.max((x - y.conj()).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.check(Constraint::TracePreservation, self.trace_preservation_error());
        report.check(Constraint::Hermiticity, self.hermiticity_error());
        report
    }

    /// `vec(ρ') = A · vec(ρ)`. Linear in `rho`, so any `d × d` matrix is
    /// accepted; positivity of the output is not checked.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.dim() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "map on d={} applied to a {}x{} matrix",
                self.d,
                rho.dim(),
                rho.dim()
            )));
        }
        Ok(unvec(self.d, self.matrix.matvec(&vec_of(rho))?))
    }

    pub fn to_dynamical(&self) -> DynamicalMap {
        DynamicalMap { d: self.d, matrix: realign(&self.matrix).expect("d² dimension") }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &StochasticMap) -> Result<StochasticMap> {
        if self.d != first.d {
            return Err(Error::DimensionMismatch(format!("composing maps with d={} and d={}", self.d, first.d)));
        }
        Ok(StochasticMap { d: self.d, matrix: self.matrix.matmul(&first.matrix)? })
    }

    pub fn inverse(&self) -> Result<StochasticMap> {
        Ok(StochasticMap { d: self.d, matrix: tensor::invert(&self.matrix)? })
    }
}

impl DynamicalMap {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = system_dim(&matrix)?;
        Ok(DynamicalMap { d, matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn to_stochastic(&self) -> StochasticMap {
        StochasticMap { d: self.d, matrix: realign(&self.matrix).expect("d² dimension") }
    }

    /// Hermiticity, trace `d`, and output partial trace `I_d`.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let d = self.d;
        let pt = partial_trace(&self.matrix, d, d, Subsystem::First).expect("d² dimension");
        report.check(Constraint::TracePreservation, pt.max_abs_diff(&CMatrix::identity(d)));
        report.check(Constraint::Hermiticity, self.matrix.hermitian_deviation());
        report.check(Constraint::Trace, (self.matrix.trace() - Complex64::new(d as f64, 0.0)).norm());
        report
    }

    pub fn cp_classify(&self, tolerance: f64) -> Result<CpReport> {
        let spectrum = hermitian_eig(&self.matrix)?;
        let min_eigenvalue = spectrum.min();
        let verdict = if min_eigenvalue < -tolerance { Verdict::Ncp } else { Verdict::Cp };
        Ok(CpReport { eigenvalues: spectrum.eigenvalues, min_eigenvalue, tolerance, verdict })
    }

    pub fn cp_classify_default(&self) -> Result<CpReport> {
        self.cp_classify(default_cp_tolerance(self.d))
    }
}

pub fn a_to_b(map: &StochasticMap) -> DynamicalMap {
    map.to_dynamical()
}

pub fn b_to_a(map: &DynamicalMap) -> StochasticMap {
    map.to_stochastic()
}

/// `A(t₂,t₁) = A(t₂,0) · A(t₁,0)⁻¹`.
///
/// Returns [`Error::Singular`] when `A(t₁,0)` cannot be inverted, in which
/// case the intermediate map is undefined.
pub fn intermediate(a_t2: &StochasticMap, a_t1: &StochasticMap) -> Result<StochasticMap> {
    if a_t2.d != a_t1.d {
        return Err(Error::DimensionMismatch(format!("maps with d={} and d={}", a_t2.d, a_t1.d)));
    }
    a_t2.compose(&a_t1.inverse()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "NCP")]
    Ncp,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Cp => "CP",
            Verdict::Ncp => "NCP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpReport {
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl CpReport {
    pub fn is_cp(&self) -> bool {
        self.verdict == Verdict::Cp
    }
}

/// The system–ancilla operator `B / d`.
#[derive(Debug, Clone)]
pub struct JamiolkowskiState {
    pub matrix: CMatrix,
    /// False when the map is NCP and `matrix` is only a pseudo-state.
    pub is_state: bool,
    pub min_eigenvalue: f64,
}

pub fn jamiolkowski_state(map: &StochasticMap) -> Result<JamiolkowskiState> {
    let b = map.to_dynamical();
    let report = b.cp_classify_default()?;
    let scale = 1.0 / map.d as f64;
    Ok(JamiolkowskiState {
        matrix: b.matrix.scale_real(scale),
        is_state: report.is_cp(),
        min_eigenvalue: report.min_eigenvalue * scale,
    })
}
