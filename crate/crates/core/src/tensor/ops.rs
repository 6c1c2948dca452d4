use num_complex::Complex64;

use super::{hermitian_eig, CMatrix, ZERO};
use crate::error::{Error, Result};

/// Pivot threshold for [`invert`], relative to the largest entry.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = CMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Traces out `which` factor of an operator on a `dim_first × dim_second` space.
pub fn partial_trace(m: &CMatrix, dim_first: usize, dim_second: usize, which: Subsystem) -> Result<CMatrix> {
    if dim_first * dim_second != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over {dim_first}x{dim_second} factors of a {}-dimensional operator",
            m.dim()
        )));
    }
    let out = match which {
        Subsystem::Second => CMatrix::from_fn(dim_first, |i, j| {
            (0..dim_second).map(|k| m[(i * dim_second + k, j * dim_second + k)]).sum()
        }),
        Subsystem::First => CMatrix::from_fn(dim_second, |k, l| {
            (0..dim_first).map(|i| m[(i * dim_second + k, i * dim_second + l)]).sum()
        }),
    };
    Ok(out)
}

/// Index realignment `out[(x,z),(y,w)] = m[(x,y),(z,w)]` on a `d² × d²` matrix.
///
/// This is the exchange between the A (stochastic) and B (dynamical) forms
/// of a map; it is its own inverse.
pub fn realign(m: &CMatrix) -> Result<CMatrix> {
    let d = m.is_square_of().ok_or(Error::NotPerfectSquare(m.dim()))?;
    Ok(CMatrix::from_fn(m.dim(), |row, col| {
        let (x, z) = (row / d, row % d);
        let (y, w) = (col / d, col % d);
        m[(x * d + y, z * d + w)]
    }))
}

/// Gauss–Jordan inversion with partial pivoting.
///
/// Fails with [`Error::Singular`] when a pivot falls below
/// `1e-12 · max|m_ij|`.
pub fn invert(m: &CMatrix) -> Result<CMatrix> {
    let n = m.dim();
    let threshold = SINGULAR_REL_TOL * m.max_abs();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n);

    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[(r, col)].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot < threshold || pivot == 0.0 {
            return Err(Error::Singular { pivot, threshold });
        }
        if pivot_row != col {
            for j in 0..n {
                let (p, c) = (a[(pivot_row, j)], a[(col, j)]);
                a[(pivot_row, j)] = c;
                a[(col, j)] = p;
                let (p, c) = (inv[(pivot_row, j)], inv[(col, j)]);
                inv[(pivot_row, j)] = c;
                inv[(col, j)] = p;
            }
        }
        let scale = a[(col, col)].inv();
        for j in 0..n {
            a[(col, j)] *= scale;
            inv[(col, j)] *= scale;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[(r, col)];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                a[(r, j)] -= f * aj;
                inv[(r, j)] -= f * ij;
            }
        }
    }
    Ok(inv)
}

/// `exp(-i h t)` for Hermitian `h`, through its eigendecomposition.
pub fn unitary_from_hamiltonian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let spec = hermitian_eig(h)?;
    let n = h.dim();
    let phases: Vec<Complex64> = spec.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * t)).collect();
    let v = &spec.eigenvectors;
    let vd = CMatrix::from_fn(n, |i, j| v[(i, j)] * phases[j]);
    vd.matmul(&v.adjoint())
}
