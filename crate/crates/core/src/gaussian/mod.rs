//! Gaussian states in the moment representation.
//!
//! A state of `N` bosonic modes is stored as its mean vector and symmetrized
//! covariance matrix over the quadrature vector `(x₁, p₁, …, x_N, p_N)`, with
//! the annihilation operator written `â = x̂ + i p̂`. The commutator is
//! `[x̂, p̂] = i/2`, so the vacuum covariance is `I/4` and a covariance matrix
//! `V` is physical iff `V + (i/4) Ω ⪰ 0`, where `Ω` is block-diagonal with
//! blocks `[[0, 1], [-1, 0]]`.
//!
//! Mode indices in this crate are zero-based.

mod io;
mod sampling;
mod state;
mod symplectic;
mod wigner;

pub use io::{StateDocument, CONVENTION};
pub use sampling::{sample_quadratures, HomodyneSampler};
pub use state::{GaussianState, SqueezeAxis};
pub use symplectic::SymplecticOp;
pub use wigner::WignerFunction;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Absolute tolerance on covariance symmetry.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Tolerance on the smallest eigenvalue of `V + (i/4) Ω`.
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance on `S Ω Sᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Smallest covariance determinant accepted by the Wigner evaluator.
pub const MIN_WIGNER_DET: f64 = 1e-300;

/// Vacuum variance of a single quadrature.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// The symplectic form `Ω` for `n` modes.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic inner product `a Ω bᵀ` of two quadrature coefficient vectors.
///
/// Two linear quadrature combinations commute iff this vanishes.
pub fn symplectic_product(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.chunks(2)
        .zip(b.chunks(2))
        .map(|(u, w)| u[0] * w[1] - u[1] * w[0])
        .sum()
}

/// Smallest eigenvalue of the Hermitian matrix `cov + (i/4) Ω`.
pub fn uncertainty_min_eigenvalue(cov: &DMatrix<f64>) -> f64 {
    let n = cov.nrows() / 2;
    let omega = symplectic_form(n);
    let h = DMatrix::from_fn(cov.nrows(), cov.ncols(), |i, j| {
        Complex64::new(cov[(i, j)], 0.25 * omega[(i, j)])
    });
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest absolute entry, used to scale tolerances for strongly squeezed states.
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// A point in `N`-mode phase space, `(x₁, p₁, …, x_N, p_N)`.
///
/// Equivalently a vector of complex amplitudes `αᵢ = xᵢ + i pᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpacePoint {
    coords: Vec<f64>,
}

impl PhaseSpacePoint {
    pub fn new(coords: Vec<f64>) -> crate::Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return crate::error::invalid(format!(
                "phase-space point needs an even, non-zero number of coordinates, got {}",
                coords.len()
            ));
        }
        Ok(Self { coords })
    }

    pub fn from_amplitudes(alpha: &[Complex64]) -> Self {
        let coords = alpha.iter().flat_map(|a| [a.re, a.im]).collect();
        Self { coords }
    }

    pub fn origin(n_modes: usize) -> Self {
        Self {
            coords: vec![0.0; 2 * n_modes],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.coords
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect()
    }
}
