use crate::error::{Error, Result};
use crate::tensor::{hermitian_eig, CMatrix};

use super::{DynamicalMap, StochasticMap};

/// Operator-sum representation `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let mut out = CMatrix::zeros(rho.dim());
        for k in &self.operators {
            out = &out + &k.matmul(rho)?.matmul(&k.adjoint())?;
        }
        Ok(out)
    }

    /// `Σ K†K`; the identity for a trace-preserving map.
    pub fn completeness(&self) -> CMatrix {
        let d = self.operators.first().map_or(0, CMatrix::dim);
        self.operators
            .iter()
            .fold(CMatrix::zeros(d), |acc, k| &acc + &(&k.adjoint() * k))
    }

    /// The A-map this set implements.
    pub fn to_stochastic(&self) -> Result<StochasticMap> {
        let d = self.operators.first().map_or(0, CMatrix::dim);
        let mut a = CMatrix::zeros(d * d);
        for a1 in 0..d {
            for a2 in 0..d {
                let out = self.apply(&CMatrix::unit(d, a1, a2))?;
                for b1 in 0..d {
                    for b2 in 0..d {
                        a[(b1 * d + b2, a1 * d + a2)] = out[(b1, b2)];
                    }
                }
            }
        }
        StochasticMap::new(a)
    }
}

/// Kraus operators `K_i = √λ_i · unvec(v_i)` from the Choi eigenpairs.
///
/// Eigenvalues inside `[-tolerance, 0]` are dropped; anything more negative
/// is rejected as [`Error::NotCompletelyPositive`].
pub fn kraus_from_choi(map: &DynamicalMap, tolerance: f64) -> Result<KrausSet> {
    let spectrum = hermitian_eig(map.matrix())?;
    if spectrum.min() < -tolerance {
        return Err(Error::NotCompletelyPositive { min_eigenvalue: spectrum.min() });
    }
    let d = map.d();
    let operators = spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, &l)| {
            let v = spectrum.eigenvector(k);
            let s = l.sqrt();
            CMatrix::from_fn(d, |b, a| v[b * d + a] * s)
        })
        .collect();
    Ok(KrausSet { operators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynmaps::default_cp_tolerance;
    use num_complex::Complex64;

    #[test]
    fn identity_channel_has_one_kraus_operator() {
        let b = StochasticMap::identity(2).to_dynamical();
        let ks = kraus_from_choi(&b, 1e-9).unwrap();
        assert_eq!(ks.operators.len(), 1);
        let k = &ks.operators[0];
        // proportional to the identity up to a global phase
        let phase = k[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-14);
        assert!(k.max_abs_diff(&CMatrix::identity(2).scale(phase)) < 1e-14);
    }

    #[test]
    fn werner_kraus_action_on_matrix_units() {
        let p = 0.35;
        // B = (1−p)/2·I + 2p|ψ⟩⟨ψ|, ψ = (|00⟩ + |11⟩)/√2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [Complex64::new(s, 0.0), Complex64::default(), Complex64::default(), Complex64::new(s, 0.0)];
        let b = &CMatrix::identity(4).scale_real((1.0 - p) / 2.0) + &CMatrix::outer(&phi, &phi).unwrap().scale_real(2.0 * p);
        let ks = kraus_from_choi(&DynamicalMap::new(b).unwrap(), default_cp_tolerance(2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = CMatrix::unit(2, i, j);
                let expect = &e.scale_real(p) + &CMatrix::identity(2).scale(e.trace() * ((1.0 - p) / 2.0));
                assert!(ks.apply(&e).unwrap().max_abs_diff(&expect) < 1e-12);
            }
        }
        assert!(ks.completeness().max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn ncp_map_is_rejected() {
        let a = StochasticMap::new(CMatrix::diag_real(&[1.0, 1.2, 1.2, 1.0])).unwrap();
        let err = kraus_from_choi(&a.to_dynamical(), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotCompletelyPositive { min_eigenvalue } if (min_eigenvalue + 0.2).abs() < 1e-12));
    }
}
