use std::ops::Mul;

use nalgebra::DMatrix;

use super::{max_abs, symplectic_form, SYMPLECTIC_TOL};
use crate::error::{invalid, Result};

/// A linear symplectic map on the `2N` quadratures.
///
/// `matrix` acts on column vectors `(x₁, p₁, …, x_N, p_N)ᵀ` in the
/// Heisenberg picture, so the covariance transforms as `V ↦ S V Sᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticOp {
    /// Wraps a `2N × 2N` matrix after checking `S Ω Sᵀ = Ω`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 || !matrix.nrows().is_multiple_of(2) {
            return invalid(format!(
                "symplectic matrix must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return invalid("symplectic matrix has non-finite entries");
        }
        let op = Self {
            n_modes: matrix.nrows() / 2,
            matrix,
        };
        let defect = op.symplectic_defect();
        let scale = max_abs(&op.matrix).powi(2).max(1.0);
        if defect > SYMPLECTIC_TOL * scale {
            return invalid(format!("matrix is not symplectic (defect {defect:.3e})"));
        }
        Ok(op)
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Lifts a real `N × N` mode-mixing matrix (acting alike on `â`, hence on
    /// the x and p blocks) to phase space.
    pub(crate) fn from_mode_matrix(modes: &DMatrix<f64>) -> Self {
        let n = modes.nrows();
        let mut matrix = DMatrix::zeros(2 * n, 2 * n);
        for a in 0..n {
            for b in 0..n {
                matrix[(2 * a, 2 * b)] = modes[(a, b)];
                matrix[(2 * a + 1, 2 * b + 1)] = modes[(a, b)];
            }
        }
        Self { n_modes: n, matrix }
    }

    /// Phase-free beam splitter between modes `k` and `l` of an `n`-mode system.
    ///
    /// The pair `(â_k, â_l)` is mixed by the kernel
    /// `[[sin θ, cos θ], [cos θ, −sin θ]]`; all other modes pass unchanged.
    pub fn beam_splitter(n: usize, k: usize, l: usize, theta: f64) -> Result<Self> {
        if k == l || k >= n || l >= n {
            return invalid(format!(
                "beam splitter needs two distinct modes below {n}, got ({k}, {l})"
            ));
        }
        if !theta.is_finite() {
            return invalid("beam splitter angle must be finite");
        }
        let (s, c) = theta.sin_cos();
        let mut modes = DMatrix::identity(n, n);
        modes[(k, k)] = s;
        modes[(k, l)] = c;
        modes[(l, k)] = c;
        modes[(l, l)] = -s;
        Ok(Self::from_mode_matrix(&modes))
    }

    /// The `N`-splitter: a cascade of beam splitters that spreads mode 0 evenly
    /// over all `n` modes.
    ///
    /// The splitter on modes `(j, j+1)` uses `sin θ = 1/√(n−j)` and the cascade
    /// runs from the first pair to the last, so the result is
    /// `B_{n−2,n−1}(π/4) ⋯ B_{0,1}(asin 1/√n)`.
    pub fn n_splitter(n: usize) -> Result<Self> {
        if n < 2 {
            return invalid(format!("an N-splitter needs at least 2 modes, got {n}"));
        }
        Self::splitter_cascade(n, 0)
    }

    /// `N`-splitter acting on modes `first..n`, identity on the others.
    pub(crate) fn splitter_cascade(n: usize, first: usize) -> Result<Self> {
        let mut op = Self::identity(n);
        for j in first..n.saturating_sub(1) {
            let theta = (1.0 / ((n - j) as f64).sqrt()).asin();
            op = &Self::beam_splitter(n, j, j + 1, theta)? * &op;
        }
        Ok(op)
    }

    /// Local squeezer on one mode: `x ↦ e^{−s} x`, `p ↦ e^{+s} p`.
    pub fn local_squeezer(n: usize, mode: usize, s: f64) -> Result<Self> {
        if mode >= n {
            return invalid(format!("mode {mode} out of range for {n} modes"));
        }
        if !s.is_finite() {
            return invalid("squeezing parameter must be finite");
        }
        let mut matrix = DMatrix::identity(2 * n, 2 * n);
        matrix[(2 * mode, 2 * mode)] = (-s).exp();
        matrix[(2 * mode + 1, 2 * mode + 1)] = s.exp();
        Ok(Self { n_modes: n, matrix })
    }

    /// `S⁻¹ = Ω⁻¹ Sᵀ Ω`, exact for any symplectic `S`.
    pub fn inverse(&self) -> Self {
        let omega = symplectic_form(self.n_modes);
        // Ω⁻¹ = −Ω
        let matrix = -(&omega * self.matrix.transpose() * &omega);
        Self {
            n_modes: self.n_modes,
            matrix,
        }
    }

    /// `‖S Ω Sᵀ − Ω‖∞` (max-entry norm).
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes);
        let diff = &self.matrix * &omega * self.matrix.transpose() - omega;
        max_abs(&diff)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// The x-block `S[2a, 2b]`, i.e. the mode-mixing matrix for passive ops.
    pub fn x_block(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        DMatrix::from_fn(n, n, |a, b| self.matrix[(2 * a, 2 * b)])
    }
}

/// Composition: `(a * b)` applies `b` first, then `a`.
impl Mul<&SymplecticOp> for &SymplecticOp {
    type Output = SymplecticOp;

    fn mul(self, rhs: &SymplecticOp) -> SymplecticOp {
        assert_eq!(
            self.n_modes, rhs.n_modes,
            "cannot compose symplectic maps of different sizes"
        );
        SymplecticOp {
            n_modes: self.n_modes,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}
