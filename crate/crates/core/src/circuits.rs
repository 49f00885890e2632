//! Beam-splitter networks that produce the multimode entangled states, and the
//! inverse network used as a GHZ-basis analyzer.
//!
//! The family states come from one momentum-squeezed mode (`r1`) and `N−1`
//! position-squeezed modes (`r2`) sent through an `N`-splitter. In the limit of
//! infinite squeezing they approach `∫dx |x, x, …, x⟩`, the continuous-variable
//! analogue of a GHZ state.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{GaussianState, HomodyneSampler, SqueezeAxis, SymplecticOp};

/// Parameters of an `N`-splitter family state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub n_modes: usize,
    /// Momentum squeezing of input mode 0.
    pub r1: f64,
    /// Position squeezing of input modes `1..N`.
    pub r2: f64,
}

impl FamilySpec {
    pub fn new(n_modes: usize, r1: f64, r2: f64) -> Result<Self> {
        let spec = Self { n_modes, r1, r2 };
        spec.validate()?;
        Ok(spec)
    }

    /// Equal squeezing `r1 = r2 = r`.
    pub fn symmetric(n_modes: usize, r: f64) -> Result<Self> {
        Self::new(n_modes, r, r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 2 {
            return invalid(format!("family state needs N >= 2, got {}", self.n_modes));
        }
        for (name, r) in [("r1", self.r1), ("r2", self.r2)] {
            if !r.is_finite() || r < 0.0 {
                return invalid(format!("{name} must be finite and non-negative, got {r}"));
            }
        }
        Ok(())
    }
}

/// Input modes of the `N`-splitter: `sq_p(r1) ⊗ sq_x(r2)^{⊗(N−1)}`.
fn family_inputs(spec: &FamilySpec) -> Result<GaussianState> {
    let mut modes = vec![GaussianState::squeezed_vacuum(
        spec.r1,
        SqueezeAxis::Momentum,
    )?];
    let pos = GaussianState::squeezed_vacuum(spec.r2, SqueezeAxis::Position)?;
    modes.extend(std::iter::repeat_n(pos, spec.n_modes - 1));
    GaussianState::tensor(&modes)
}

/// The totally symmetric `N`-mode state produced by the `N`-splitter.
pub fn make_family_state(spec: &FamilySpec) -> Result<GaussianState> {
    spec.validate()?;
    family_inputs(spec)?.apply(&SymplecticOp::n_splitter(spec.n_modes)?)
}

/// A two-mode squeezed vacuum on modes 0 and 1 next to a vacuum mode 2.
///
/// Only partially entangled: mode 2 factors out.
pub fn make_partial_three_mode(r: f64) -> Result<GaussianState> {
    if !r.is_finite() || r < 0.0 {
        return invalid(format!(
            "squeezing must be finite and non-negative, got {r}"
        ));
    }
    let pair = make_family_state(&FamilySpec::symmetric(2, r)?)?;
    GaussianState::tensor(&[pair, GaussianState::vacuum(1)?])
}

/// Parameters of the `(M+1)`-mode multiuser quantum channel state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MqcSpec {
    /// Number of receivers `M`.
    pub receivers: usize,
    /// Angle of the first beam splitter.
    pub theta0: f64,
}

/// Distance in `sin θ₀` within which an admissibility bound counts as hit.
pub const MQC_BOUNDARY_TOL: f64 = 1e-12;

impl MqcSpec {
    pub fn new(receivers: usize, theta0: f64) -> Result<Self> {
        let spec = Self { receivers, theta0 };
        spec.derived_squeezing()?;
        Ok(spec)
    }

    /// Admissible interval for `sin θ₀`: `[1/√(M+1), √(M/(M+1))]`.
    pub fn sin_bounds(&self) -> (f64, f64) {
        let m = self.receivers as f64;
        ((1.0 / (m + 1.0)).sqrt(), (m / (m + 1.0)).sqrt())
    }

    /// Squeezing `(r1, r2)` fixed by `θ₀`:
    /// `e^{−2r1} = (√M sin θ₀ − cos θ₀)/(√M sin θ₀ + cos θ₀)` and
    /// `e^{−2r2} = (√M cos θ₀ − sin θ₀)/(√M cos θ₀ + sin θ₀)`.
    ///
    /// At the lower bound `r1` diverges, at the upper bound `r2` does; both
    /// endpoints are rejected.
    pub fn derived_squeezing(&self) -> Result<(f64, f64)> {
        if self.receivers == 0 {
            return invalid("MQC state needs at least one receiver");
        }
        if !self.theta0.is_finite() {
            return invalid("theta0 must be finite");
        }
        let (lo, hi) = self.sin_bounds();
        let (s, c) = self.theta0.sin_cos();
        if s < lo - MQC_BOUNDARY_TOL {
            return invalid(format!(
                "sin(theta0) = {s} violates the lower bound 1/sqrt(M+1) = {lo}"
            ));
        }
        if s > hi + MQC_BOUNDARY_TOL {
            return invalid(format!(
                "sin(theta0) = {s} violates the upper bound sqrt(M/(M+1)) = {hi}"
            ));
        }
        if (s - lo).abs() <= MQC_BOUNDARY_TOL {
            return invalid(format!(
                "sin(theta0) sits on the lower bound 1/sqrt(M+1) = {lo}: r1 is infinite"
            ));
        }
        if (s - hi).abs() <= MQC_BOUNDARY_TOL {
            return invalid(format!(
                "sin(theta0) sits on the upper bound sqrt(M/(M+1)) = {hi}: r2 is infinite"
            ));
        }
        let m = (self.receivers as f64).sqrt();
        let e1 = (m * s - c) / (m * s + c);
        let e2 = (m * c - s) / (m * c + s);
        if !(e1 > 0.0 && e1 <= 1.0 && e2 > 0.0 && e2 <= 1.0) {
            return invalid(format!(
                "theta0 = {} gives negative or non-finite squeezing (cos(theta0) must be positive)",
                self.theta0
            ));
        }
        Ok((-0.5 * e1.ln(), -0.5 * e2.ln()))
    }

    /// Mid-point of the admissible `sin θ₀` interval.
    pub fn midpoint(receivers: usize) -> Result<Self> {
        let probe = Self {
            receivers,
            theta0: 0.0,
        };
        let (lo, hi) = probe.sin_bounds();
        Self::new(receivers, (0.5 * (lo + hi)).asin())
    }
}

/// `U_MQC = [M-splitter on modes 1..=M] · B₀₁(θ₀)`.
pub fn mqc_network(spec: &MqcSpec) -> Result<SymplecticOp> {
    let n = spec.receivers + 1;
    let first = SymplecticOp::beam_splitter(n, 0, 1, spec.theta0)?;
    let spread = SymplecticOp::splitter_cascade(n, 1)?;
    Ok(&spread * &first)
}

/// The `(M+1)`-mode multiuser quantum channel state.
pub fn make_mqc_state(spec: &MqcSpec) -> Result<GaussianState> {
    let (r1, r2) = spec.derived_squeezing()?;
    let mut modes = vec![
        GaussianState::squeezed_vacuum(r1, SqueezeAxis::Momentum)?,
        GaussianState::squeezed_vacuum(r2, SqueezeAxis::Position)?,
    ];
    if spec.receivers > 1 {
        modes.push(GaussianState::vacuum(spec.receivers - 1)?);
    }
    GaussianState::tensor(&modes)?.apply(&mqc_network(spec)?)
}

/// Coefficient vectors (over the original quadratures) of the analyzer's
/// measured observables `p'₁, x'₂, …, x'_N`, where `b' = U†(N) b`.
pub fn analyzer_observables(n: usize) -> Result<Vec<Vec<f64>>> {
    let u = SymplecticOp::n_splitter(n)?.x_block();
    // row k of U† is column k of U
    let column = |k: usize, quad: usize| {
        let mut c = vec![0.0; 2 * n];
        for j in 0..n {
            c[2 * j + quad] = u[(j, k)];
        }
        c
    };
    let mut obs = vec![column(0, 1)];
    obs.extend((1..n).map(|k| column(k, 0)));
    Ok(obs)
}

/// Output of the GHZ-basis analyzer.
#[derive(Debug, Clone)]
pub struct GhzAnalyzerResult {
    /// State after the inverse `N`-splitter.
    pub transformed: GaussianState,
    /// `p'₁, x'₂, …, x'_N` as coefficient vectors on the input quadratures.
    pub observables: Vec<Vec<f64>>,
}

/// One simulated analyzer shot.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerRecord {
    /// Homodyne outcomes `(p'₁, x'₂, …, x'_N)`.
    pub outcomes: Vec<f64>,
    pub parameters: GhzParameters,
}

impl GhzAnalyzerResult {
    /// Variances of the measured observables, read off the transformed state.
    pub fn variances(&self) -> Vec<f64> {
        let cov = self.transformed.cov();
        let n = self.transformed.n_modes();
        std::iter::once(cov[(1, 1)])
            .chain((1..n).map(|k| cov[(2 * k, 2 * k)]))
            .collect()
    }

    /// Simulates `shots` homodyne records and decodes each into `(v, u)`.
    pub fn sample(&self, shots: usize, seed: u64) -> Result<Vec<AnalyzerRecord>> {
        let n = self.transformed.n_modes();
        let select = |idx: usize| {
            let mut c = vec![0.0; 2 * n];
            c[idx] = 1.0;
            c
        };
        let mut obs = vec![select(1)];
        obs.extend((1..n).map(|k| select(2 * k)));
        let sampler = HomodyneSampler::new(&self.transformed, &obs)?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..shots)
            .map(|_| {
                let outcomes = sampler.sample(&mut rng);
                let parameters = reconstruct_parameters(&outcomes, n)?;
                Ok(AnalyzerRecord {
                    outcomes,
                    parameters,
                })
            })
            .collect()
    }
}

/// Inverse `N`-splitter followed by detection of `p'₁` and `x'₂, …, x'_N`.
pub fn ghz_analyzer(state: &GaussianState) -> Result<GhzAnalyzerResult> {
    let n = state.n_modes();
    if n < 2 {
        return invalid("the GHZ analyzer needs at least two modes");
    }
    let inverse = SymplecticOp::n_splitter(n)?.inverse();
    Ok(GhzAnalyzerResult {
        transformed: state.apply(&inverse)?,
        observables: analyzer_observables(n)?,
    })
}

/// Labels of a continuous-variable GHZ basis state: total momentum `v` and
/// relative positions `u_k = x_k − x_{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhzParameters {
    pub v: f64,
    pub u: Vec<f64>,
}

/// Coefficient of `u_{k−1+j}` in `x'_k` where `n = N − k + 2`:
/// `√((n−1)/n) · (n−1−j)/(n−1)`.
fn detection_weight(n: usize, j: usize) -> f64 {
    let nf = n as f64;
    ((nf - 1.0) / nf).sqrt() * (nf - 1.0 - j as f64) / (nf - 1.0)
}

/// Decodes analyzer outcomes `(p'₁, x'₂, …, x'_N)` into `(v, u₁, …, u_{N−1})`.
///
/// `v = √N p'₁`; the `x'` outcomes form an upper-triangular system in `u`,
/// solved by back-substitution from `u_{N−1} = √2 x'_N`.
pub fn reconstruct_parameters(outcomes: &[f64], n: usize) -> Result<GhzParameters> {
    if n < 2 {
        return invalid("need at least two modes");
    }
    if outcomes.len() != n {
        return invalid(format!("expected {n} outcomes, got {}", outcomes.len()));
    }
    let v = (n as f64).sqrt() * outcomes[0];
    let mut u = vec![0.0; n - 1];
    // x'_k, k = 2..=N, pins u index k−2 (zero-based)
    for k in (2..=n).rev() {
        let depth = n - k + 2;
        let diag = k - 2;
        let tail: f64 = (1..depth - 1)
            .map(|j| detection_weight(depth, j) * u[diag + j])
            .sum();
        u[diag] = (outcomes[k - 1] - tail) / detection_weight(depth, 0);
    }
    Ok(GhzParameters { v, u })
}

/// Both branches `(e^{+2r1}, e^{−2r1})` of the minimum-energy relation
/// `e^{±2r1} = (N−1) sinh 2r2 [√(1 + 1/((N−1)² sinh² 2r2)) ± 1]`.
pub fn min_energy_branches(n: usize, r2: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return invalid(format!("need N >= 2, got {n}"));
    }
    if !r2.is_finite() || r2 <= 0.0 {
        return invalid(format!(
            "the minimum-energy relation needs finite r2 > 0, got {r2}"
        ));
    }
    let x = (n - 1) as f64 * (2.0 * r2).sinh();
    let root = (1.0 + 1.0 / (x * x)).sqrt();
    let plus = x * (root + 1.0);
    // x (root − 1), rationalized
    let minus = (1.0 / x) / (root + 1.0);
    Ok((plus, minus))
}

/// Momentum squeezing `r1` of the family member with the least mean photon
/// number for given `N` and `r2`, i.e. the one whose modes have equal x and p
/// variances.
pub fn min_energy_r1(n: usize, r2: f64) -> Result<f64> {
    Ok(0.5 * min_energy_branches(n, r2)?.0.ln())
}

/// One-squeezer two-mode state after local squeezers `s1 = s2 = r1/2`, paired
/// with the canonical two-mode squeezed vacuum at `r = r1/2`.
pub fn convert_one_squeezer_to_canonical(r1: f64) -> Result<(GaussianState, GaussianState)> {
    let one = make_family_state(&FamilySpec::new(2, r1, 0.0)?)?;
    let s = 0.5 * r1;
    let local = &SymplecticOp::local_squeezer(2, 1, s)? * &SymplecticOp::local_squeezer(2, 0, s)?;
    let converted = one.apply(&local)?;
    let canonical = make_family_state(&FamilySpec::symmetric(2, s)?)?;
    Ok((converted, canonical))
}

/// Largest entry-wise difference between two covariance matrices.
pub fn covariance_distance(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.n_modes() != b.n_modes() {
        return Err(Error::InvalidArgument("states differ in mode count".into()));
    }
    let d: DMatrix<f64> = a.cov() - b.cov();
    Ok(d.amax())
}
