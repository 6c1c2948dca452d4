use crate::error::{Error, Result};
use crate::tensor::{hermitian_eig, kron, pauli, CMatrix};

/// Wootters concurrence of a two-qubit state.
///
/// The values `μ_i` (square roots of the eigenvalues of `ρ(σy⊗σy)ρ*(σy⊗σy)`)
/// are obtained as singular values of `τ = Wᵀ(σy⊗σy)W`, where `ρ = WW†`,
/// which avoids square-rooting near-zero eigenvalues. The singular values
/// come from the Hermitian dilation `[[0, τ], [τ†, 0]]`.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("concurrence needs a 4x4 state, got {0}x{0}", rho.dim())));
    }
    let spec = hermitian_eig(rho)?;
    let w = CMatrix::from_fn(4, |i, k| spec.eigenvectors[(i, k)] * spec.eigenvalues[k].max(0.0).sqrt());
    let yy = kron(&pauli::y(), &pauli::y());
    let tau = w.transpose().matmul(&yy)?.matmul(&w)?;

    let mut dilation = CMatrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, 4 + j)] = tau[(i, j)];
            dilation[(4 + j, i)] = tau[(i, j)].conj();
        }
    }
    let mut mu: Vec<f64> = hermitian_eig(&dilation)?.eigenvalues.split_off(4);
    mu.reverse();
    let c = mu[0] - mu[1] - mu[2] - mu[3];
    Ok(c.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ZERO;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn werner(p: f64) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [Complex64::new(s, 0.0), ZERO, ZERO, Complex64::new(-s, 0.0)];
        &CMatrix::identity(4).scale_real((1.0 - p) / 4.0) + &CMatrix::outer(&phi, &phi).unwrap().scale_real(p)
    }

    fn spin_flip(rho: &CMatrix) -> CMatrix {
        let yy = kron(&pauli::y(), &pauli::y());
        &(&yy * &rho.conj()) * &yy
    }

    /// Square roots of eigenvalues of √ρ ρ̃ √ρ, the textbook route.
    fn concurrence_via_sqrt(rho: &CMatrix) -> f64 {
        let spec = hermitian_eig(rho).unwrap();
        let v = &spec.eigenvectors;
        let sq = CMatrix::from_fn(4, |i, j| v[(i, j)] * spec.eigenvalues[j].max(0.0).sqrt());
        let sqrt_rho = &sq * &v.adjoint();
        let r = (&(&sqrt_rho * &spin_flip(rho)) * &sqrt_rho).hermitian_part();
        let mut mu: Vec<f64> = hermitian_eig(&r).unwrap().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        mu.sort_by(|a, b| b.total_cmp(a));
        (mu[0] - mu[1] - mu[2] - mu[3]).max(0.0)
    }

    #[test]
    fn werner_closed_form() {
        assert!((concurrence(&werner(1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(&werner(1.0 / 3.0)).unwrap(), 0.0);
        assert!((concurrence(&werner(0.5)).unwrap() - 0.25).abs() < 1e-12);
        for k in 0..=50 {
            let p = k as f64 / 50.0;
            let expect = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&werner(p)).unwrap() - expect).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn product_and_bell_states() {
        let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let a = CMatrix::outer(&v, &v).unwrap();
        assert!(concurrence(&kron(&a, &a)).unwrap() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [ZERO, Complex64::new(s, 0.0), Complex64::new(0.0, s), ZERO];
        assert!((concurrence(&CMatrix::outer(&psi, &psi).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_textbook_route_on_random_mixed_states() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let g = CMatrix::from_fn(4, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let rho = &g * &g.adjoint();
            let rho = rho.scale_real(1.0 / rho.trace().re);
            let (c1, c2) = (concurrence(&rho).unwrap(), concurrence_via_sqrt(&rho));
            assert!((c1 - c2).abs() < 1e-8, "{c1} vs {c2}");
        }
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert!(matches!(concurrence(&CMatrix::identity(2)), Err(Error::DimensionMismatch(_))));
    }
}
