use std::f64::consts::PI;

use nalgebra::{Cholesky, DVector, Dyn};

use super::{GaussianState, PhaseSpacePoint, MIN_WIGNER_DET};
use crate::error::{invalid, Error, Result};

/// Precomputed Gaussian Wigner function
/// `W(ξ) = exp(−½ (ξ−m) V⁻¹ (ξ−m)ᵀ) / ((2π)^N √det V)`.
#[derive(Debug, Clone)]
pub struct WignerFunction {
    n_modes: usize,
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    log_norm: f64,
}

impl WignerFunction {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let n = state.n_modes();
        let chol = Cholesky::new(state.cov().clone()).ok_or_else(|| {
            Error::Degenerate("covariance matrix is not positive definite".into())
        })?;
        let log_det = 2.0
            * chol
                .l_dirty()
                .diagonal()
                .iter()
                .map(|d| d.ln())
                .sum::<f64>();
        if !log_det.is_finite() || log_det < MIN_WIGNER_DET.ln() {
            return Err(Error::Degenerate(format!(
                "covariance determinant e^{log_det:.1} is below {MIN_WIGNER_DET:e}"
            )));
        }
        let log_norm = -(n as f64) * (2.0 * PI).ln() - 0.5 * log_det;
        Ok(Self {
            n_modes: n,
            mean: state.mean().clone(),
            chol,
            log_norm,
        })
    }

    pub fn eval(&self, point: &PhaseSpacePoint) -> Result<f64> {
        if point.n_modes() != self.n_modes {
            return invalid(format!(
                "point has {} modes, state has {}",
                point.n_modes(),
                self.n_modes
            ));
        }
        let xi = DVector::from_column_slice(point.coords()) - &self.mean;
        let solved = self.chol.solve(&xi);
        Ok((self.log_norm - 0.5 * xi.dot(&solved)).exp())
    }

    /// Value at the mean, `1/((2π)^N √det V)`.
    pub fn peak(&self) -> f64 {
        self.log_norm.exp()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
}
