use nalgebra::DMatrix;
use num_complex::Complex64;

use super::spectrum::{Eigenspectrum, ZERO_EIG_TOL};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// Normalized (unit-diagonal) Hermitian positive semi-definite correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<Complex64>,
}

impl CorrelationMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || entries.ncols() != dim {
            return Err(Error::Validation(format!(
                "correlation matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for i in 0..dim {
            if (entries[(i, i)] - Complex64::new(1.0, 0.0)).norm() > DIAGONAL_TOL {
                return Err(Error::Validation(format!(
                    "diagonal entry ({i},{i}) = {} is not 1",
                    entries[(i, i)]
                )));
            }
            for j in 0..dim {
                let a = entries[(i, j)];
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return Err(Error::Validation(format!("entry ({i},{j}) is not finite")));
                }
                if (a - entries[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::Validation(format!(
                        "matrix is not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::Validation(format!(
                "matrix is indefinite (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        Ok(Self {
            entries: DMatrix::identity(dim, dim),
        })
    }

    /// [[1, ρ], [ρ*, 1]].
    pub fn two_antenna(rho: Complex64) -> Result<Self> {
        Self::exponential(2, rho)
    }

    /// Exponential model: entry (i, j) = ρ^{j−i} above the diagonal, conjugate below.
    pub fn exponential(dim: usize, rho: Complex64) -> Result<Self> {
        if !(rho.norm() < 1.0) {
            return Err(Error::Validation(format!(
                "correlation coefficient must satisfy |rho| < 1, got {rho}"
            )));
        }
        if dim == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        let entries = DMatrix::from_fn(dim, dim, |i, j| {
            if j >= i {
                rho.powu((j - i) as u32)
            } else {
                rho.conj().powu((i - j) as u32)
            }
        });
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (0..dim).all(|j| i == j || self.entries[(i, j)].norm() == 0.0))
    }

    /// Real eigenvalues, descending, with numerical zeros removed.
    pub fn eigenvalues(&self) -> Result<Eigenspectrum<f64>> {
        let eig = self.entries.clone().symmetric_eigenvalues();
        Eigenspectrum::new(eig.iter().copied().collect())
    }

    /// Lower-triangular F with F·F^† = R.
    pub fn sampling_factor(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.dim();
        let min_eig = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < ZERO_EIG_TOL * dim as f64 {
            return Err(Error::Validation(format!(
                "correlation matrix is rank deficient (smallest eigenvalue {min_eig:e})"
            )));
        }
        self.entries
            .clone()
            .cholesky()
            .map(|c| c.unpack())
            .ok_or_else(|| Error::Validation("Cholesky factorization failed".into()))
    }
}
