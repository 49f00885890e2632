use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{symplectic_product, GaussianState};
use crate::error::{invalid, Result};

/// Tolerance on `a Ω bᵀ` for a set of observables to count as commuting.
pub const COMMUTATION_TOL: f64 = 1e-10;

/// Joint sampler for a set of mutually commuting quadrature combinations,
/// i.e. simulated homodyne records.
#[derive(Debug, Clone)]
pub struct HomodyneSampler {
    mean: DVector<f64>,
    transform: DMatrix<f64>,
}

impl HomodyneSampler {
    /// `observables[k]` is a coefficient vector of length `2N`.
    pub fn new(state: &GaussianState, observables: &[Vec<f64>]) -> Result<Self> {
        if observables.is_empty() {
            return invalid("no observables to sample");
        }
        let dim = 2 * state.n_modes();
        if let Some(bad) = observables.iter().find(|o| o.len() != dim) {
            return invalid(format!(
                "observable has {} coefficients, state needs {dim}",
                bad.len()
            ));
        }
        for (i, a) in observables.iter().enumerate() {
            for (j, b) in observables.iter().enumerate().skip(i + 1) {
                let c = symplectic_product(a, b);
                if c.abs() > COMMUTATION_TOL {
                    return invalid(format!(
                        "observables {i} and {j} do not commute (a·Ω·b = {c:.3e}); \
                         no joint distribution exists"
                    ));
                }
            }
        }
        let k = observables.len();
        let a = DMatrix::from_fn(k, dim, |i, j| observables[i][j]);
        let mean = &a * state.mean();
        let cov = &a * state.cov() * a.transpose();
        let eig = SymmetricEigen::new((&cov + cov.transpose()) * 0.5);
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let transform = &eig.eigenvectors * DMatrix::from_diagonal(&roots);
        Ok(Self { mean, transform })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z = DVector::from_fn(self.transform.ncols(), |_, _| rng.sample(StandardNormal));
        (&self.mean + &self.transform * z).iter().copied().collect()
    }

    /// `shots` joint samples from a ChaCha stream seeded with `seed`.
    pub fn sample_many(&self, shots: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..shots).map(|_| self.sample(&mut rng)).collect()
    }
}

/// One joint sample of commuting quadrature combinations, deterministic in `seed`.
pub fn sample_quadratures(
    state: &GaussianState,
    observables: &[Vec<f64>],
    seed: u64,
) -> Result<Vec<f64>> {
    let sampler = HomodyneSampler::new(state, observables)?;
    Ok(sampler.sample(&mut ChaCha20Rng::seed_from_u64(seed)))
}
