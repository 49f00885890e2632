use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{
    max_abs, symplectic_form, uncertainty_min_eigenvalue, PhaseSpacePoint, SymplecticOp,
    WignerFunction, PSD_TOL, SYMMETRY_TOL, VACUUM_VARIANCE,
};
use crate::error::{invalid, Error, Result};

/// Which quadrature a single-mode squeezer reduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeAxis {
    /// `Var(x) = e^{−2r}/4`, `Var(p) = e^{+2r}/4`.
    Position,
    /// `Var(x) = e^{+2r}/4`, `Var(p) = e^{−2r}/4`.
    Momentum,
}

/// First and second moments of an `N`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state after validating shape, symmetry and the uncertainty
    /// relation `V + (i/4) Ω ⪰ 0`.
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return invalid(format!("mean must have even, non-zero length, got {dim}"));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return invalid(format!(
                "covariance must be {dim}x{dim}, got {}x{}",
                cov.nrows(),
                cov.ncols()
            ));
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return invalid("state contains non-finite entries");
        }
        let asym = max_abs(&(&cov - cov.transpose()));
        if asym > SYMMETRY_TOL {
            return Err(Error::Unphysical(format!(
                "covariance is not symmetric (max deviation {asym:.3e})"
            )));
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        let min_eig = uncertainty_min_eigenvalue(&cov);
        if min_eig < -PSD_TOL {
            return Err(Error::Unphysical(format!(
                "covariance violates the uncertainty relation (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self {
            n_modes: dim / 2,
            mean: DVector::from_vec(mean),
            cov,
        })
    }

    /// Zero-mean state with the given covariance.
    pub fn centered(cov: DMatrix<f64>) -> Result<Self> {
        Self::new(vec![0.0; cov.nrows()], cov)
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("vacuum needs at least one mode");
        }
        Ok(Self {
            n_modes: n,
            mean: DVector::zeros(2 * n),
            cov: DMatrix::from_diagonal_element(2 * n, 2 * n, VACUUM_VARIANCE),
        })
    }

    /// Single-mode squeezed vacuum.
    pub fn squeezed_vacuum(r: f64, axis: SqueezeAxis) -> Result<Self> {
        if !r.is_finite() {
            return invalid("squeezing parameter must be finite");
        }
        let (small, large) = ((-2.0 * r).exp() / 4.0, (2.0 * r).exp() / 4.0);
        let diag = match axis {
            SqueezeAxis::Position => [small, large],
            SqueezeAxis::Momentum => [large, small],
        };
        Ok(Self {
            n_modes: 1,
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal(&DVector::from_row_slice(&diag)),
        })
    }

    /// Product state; mode order follows the input order.
    pub fn tensor(states: &[GaussianState]) -> Result<Self> {
        if states.is_empty() {
            return invalid("tensor product of an empty list");
        }
        let n: usize = states.iter().map(|s| s.n_modes).sum();
        let mut mean = DVector::zeros(2 * n);
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        let mut offset = 0;
        for s in states {
            let d = 2 * s.n_modes;
            mean.rows_mut(offset, d).copy_from(&s.mean);
            cov.view_mut((offset, offset), (d, d)).copy_from(&s.cov);
            offset += d;
        }
        Ok(Self {
            n_modes: n,
            mean,
            cov,
        })
    }

    /// `mean ↦ S mean`, `V ↦ S V Sᵀ`.
    pub fn apply(&self, op: &SymplecticOp) -> Result<Self> {
        if op.n_modes() != self.n_modes {
            return invalid(format!(
                "operation acts on {} modes, state has {}",
                op.n_modes(),
                self.n_modes
            ));
        }
        let s = op.matrix();
        let cov = s * &self.cov * s.transpose();
        Ok(Self {
            n_modes: self.n_modes,
            mean: s * &self.mean,
            cov: (&cov + cov.transpose()) * 0.5,
        })
    }

    /// Reduced state on `keep`, in ascending mode order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let keep = self.mode_set(keep)?;
        let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.cov[(idx[a], idx[b])]);
        Ok(Self {
            n_modes: keep.len(),
            mean,
            cov,
        })
    }

    /// Sorted, deduplicated, range-checked copy of a non-empty mode set.
    pub(crate) fn mode_set(&self, modes: &[usize]) -> Result<Vec<usize>> {
        if modes.is_empty() {
            return invalid("mode set is empty");
        }
        let mut sorted = modes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != modes.len() {
            return invalid(format!("mode set {modes:?} has duplicates"));
        }
        if let Some(&m) = sorted.last().filter(|&&m| m >= self.n_modes) {
            return invalid(format!("mode {m} out of range for {} modes", self.n_modes));
        }
        Ok(sorted)
    }

    /// `c V cᵀ`: the variance of `Σ cᵢ ξ̂ᵢ` about its mean.
    pub fn quadrature_variance(&self, coeffs: &[f64]) -> Result<f64> {
        self.quadrature_covariance(coeffs, coeffs)
    }

    /// `a V bᵀ`: the symmetrized covariance of two quadrature combinations.
    pub fn quadrature_covariance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        let dim = 2 * self.n_modes;
        if a.len() != dim || b.len() != dim {
            return invalid(format!(
                "coefficient vectors must have length {dim}, got {} and {}",
                a.len(),
                b.len()
            ));
        }
        let a = DVector::from_column_slice(a);
        let b = DVector::from_column_slice(b);
        Ok(a.dot(&(&self.cov * b)))
    }

    /// Mean value of `Σ cᵢ ξ̂ᵢ`.
    pub fn quadrature_mean(&self, coeffs: &[f64]) -> Result<f64> {
        if coeffs.len() != 2 * self.n_modes {
            return invalid("coefficient vector length mismatch");
        }
        Ok(DVector::from_column_slice(coeffs).dot(&self.mean))
    }

    /// Smallest eigenvalue of `V + (i/4) Ω`; non-negative for physical states.
    pub fn physicality_margin(&self) -> f64 {
        uncertainty_min_eigenvalue(&self.cov)
    }

    pub fn is_physical(&self) -> bool {
        self.physicality_margin() >= -PSD_TOL
    }

    /// Symplectic eigenvalues `ν₁ ≤ … ≤ ν_N`, each `≥ 1/4` for physical states.
    ///
    /// Computed as the positive eigenvalues of the Hermitian matrix
    /// `i V^{1/2} Ω V^{1/2}`, which is similar to `i Ω V`.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.n_modes;
        let eig = SymmetricEigen::new(self.cov.clone());
        let sqrt_diag = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let root =
            &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_diag) * eig.eigenvectors.transpose();
        let a = &root * symplectic_form(n) * &root;
        let h = a.map(|v| Complex64::new(0.0, v));
        let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        values.sort_by(|x, y| y.total_cmp(x));
        values.truncate(n);
        values.reverse();
        values
    }

    /// True when every symplectic eigenvalue equals `1/4` within tolerance.
    pub fn is_pure(&self) -> bool {
        let tol = PSD_TOL * max_abs(&self.cov).max(1.0);
        self.symplectic_eigenvalues()
            .iter()
            .all(|nu| (nu - VACUUM_VARIANCE).abs() <= tol)
    }

    /// Von Neumann entropy (in ebits) of the reduced state on `subset`.
    ///
    /// Requires the full state to be pure, so that this is the entanglement
    /// across the cut `subset | rest`.
    pub fn entropy_of_subsystem(&self, subset: &[usize]) -> Result<f64> {
        if !self.is_pure() {
            return Err(Error::Precondition(
                "subsystem entropy measures entanglement only for pure states".into(),
            ));
        }
        let reduced = self.partial_trace(subset)?;
        Ok(reduced
            .symplectic_eigenvalues()
            .into_iter()
            .map(|nu| bosonic_entropy(2.0 * nu - 0.5))
            .sum())
    }

    /// Whether the covariance (and mean) are invariant under every permutation
    /// of `modes`. Checking adjacent transpositions suffices, since they
    /// generate the symmetric group.
    pub fn is_permutation_symmetric(&self, modes: &[usize], tol: f64) -> Result<bool> {
        let modes = self.mode_set(modes)?;
        for w in modes.windows(2) {
            let swapped = self.swap_modes(w[0], w[1]);
            let dev = max_abs(&(&swapped.cov - &self.cov)).max((&swapped.mean - &self.mean).amax());
            if dev > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same state with modes `a` and `b` relabelled.
    pub fn swap_modes(&self, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..2 * self.n_modes).collect();
        perm.swap(2 * a, 2 * b);
        perm.swap(2 * a + 1, 2 * b + 1);
        self.permuted(&perm)
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        let d = perm.len();
        Self {
            n_modes: self.n_modes,
            mean: DVector::from_fn(d, |i, _| self.mean[perm[i]]),
            cov: DMatrix::from_fn(d, d, |i, j| self.cov[(perm[i], perm[j])]),
        }
    }

    /// Reorders modes so that new mode `i` is old mode `order[i]`.
    pub fn reorder_modes(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_modes {
            return invalid("mode order must name every mode once");
        }
        let set = self.mode_set(order)?;
        debug_assert_eq!(set.len(), self.n_modes);
        let perm: Vec<usize> = order.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        Ok(self.permuted(&perm))
    }

    /// Covariance after `p_k ↦ −p_k` on the given modes (partial time reversal).
    pub(crate) fn time_reversed_cov(&self, modes: &[usize]) -> DMatrix<f64> {
        let mut flip = DVector::from_element(2 * self.n_modes, 1.0);
        for &m in modes {
            flip[2 * m + 1] = -1.0;
        }
        DMatrix::from_fn(self.cov.nrows(), self.cov.ncols(), |i, j| {
            flip[i] * flip[j] * self.cov[(i, j)]
        })
    }

    pub fn wigner_function(&self) -> Result<WignerFunction> {
        WignerFunction::new(self)
    }

    /// Wigner function at one point; see [`WignerFunction`] for repeated use.
    pub fn wigner(&self, point: &PhaseSpacePoint) -> Result<f64> {
        self.wigner_function()?.eval(point)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }
}

/// `g(n̄) = (n̄+1) log₂(n̄+1) − n̄ log₂ n̄`, the entropy of a thermal mode.
pub(crate) fn bosonic_entropy(nbar: f64) -> f64 {
    if nbar <= 0.0 {
        return 0.0;
    }
    (nbar + 1.0) * (nbar + 1.0).log2() - nbar * nbar.log2()
}
