//! Dense reference model for small multi-qubit states.
//!
//! Qubit `0` is the most significant bit of a computational-basis index, so
//! `|q₀ q₁ … q_{n−1}⟩` has index `Σ q_k 2^{n−1−k}`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Result};

pub const MAX_QUBITS: usize = 12;
pub const STATE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Pure(DVector<Complex64>),
    Mixed(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n_qubits: usize,
    repr: Repr,
}

/// Outcome of a measurement in the `(|0⟩ ± |1⟩)/√2` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub probability: f64,
    pub state: QubitState,
}

fn check_size(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_QUBITS {
        return invalid(format!("qubit count must be in 1..={MAX_QUBITS}, got {n}"));
    }
    Ok(1 << n)
}

fn bit(index: usize, n: usize, q: usize) -> usize {
    index >> (n - 1 - q) & 1
}

impl QubitState {
    pub fn pure(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_size(n)?;
        if amplitudes.len() != dim {
            return invalid(format!(
                "{n} qubits need {dim} amplitudes, got {}",
                amplitudes.len()
            ));
        }
        let v = DVector::from_vec(amplitudes);
        if (v.norm() - 1.0).abs() > STATE_TOL {
            return invalid(format!("state vector norm is {}, expected 1", v.norm()));
        }
        Ok(Self {
            n_qubits: n,
            repr: Repr::Pure(v),
        })
    }

    pub fn mixed(n: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        let dim = check_size(n)?;
        if rho.shape() != (dim, dim) {
            return invalid(format!("{n} qubits need a {dim}x{dim} density matrix"));
        }
        if (&rho - rho.adjoint()).camax() > STATE_TOL {
            return invalid("density matrix is not Hermitian");
        }
        if (rho.trace() - 1.0).norm() > STATE_TOL {
            return invalid(format!("density matrix trace is {}", rho.trace()));
        }
        let min = SymmetricEigen::new(rho.clone()).eigenvalues.min();
        if min < -STATE_TOL {
            return invalid(format!("density matrix has eigenvalue {min}"));
        }
        Ok(Self {
            n_qubits: n,
            repr: Repr::Mixed(rho),
        })
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n: usize) -> Result<Self> {
        if n < 2 {
            return invalid(format!("GHZ state needs at least two qubits, got {n}"));
        }
        let dim = check_size(n)?;
        let mut a = vec![ZERO; dim];
        a[0] = FRAC_1_SQRT_2.into();
        a[dim - 1] = FRAC_1_SQRT_2.into();
        Self::pure(n, a)
    }

    /// `(|100⟩ + |010⟩ + |001⟩)/√3`.
    pub fn w3() -> Self {
        let c = Complex64::from(1.0 / 3f64.sqrt());
        let mut a = vec![ZERO; 8];
        for i in [1, 2, 4] {
            a[i] = c;
        }
        Self {
            n_qubits: 3,
            repr: Repr::Pure(DVector::from_vec(a)),
        }
    }

    /// Computational basis state with the given bits, qubit 0 first.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        let dim = check_size(n)?;
        if bits.iter().any(|&b| b > 1) {
            return invalid("bits must be 0 or 1");
        }
        let index = bits.iter().fold(0, |acc, &b| acc << 1 | usize::from(b));
        let mut a = vec![ZERO; dim];
        a[index] = 1.0.into();
        Self::pure(n, a)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_pure_vector(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&DVector<Complex64>> {
        match &self.repr {
            Repr::Pure(v) => Some(v),
            Repr::Mixed(_) => None,
        }
    }

    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        match &self.repr {
            Repr::Pure(v) => v * v.adjoint(),
            Repr::Mixed(rho) => rho.clone(),
        }
    }

    fn vector(&self, what: &str) -> Result<&DVector<Complex64>> {
        self.amplitudes()
            .ok_or_else(|| crate::Error::InvalidArgument(format!("{what} needs a pure state")))
    }

    fn party_split(&self, party_a: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.n_qubits;
        let mut a = party_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != party_a.len() || a.iter().any(|&q| q >= n) {
            return invalid(format!(
                "qubits {party_a:?} are not distinct indices below {n}"
            ));
        }
        if a.is_empty() || a.len() == n {
            return invalid("bipartition needs a proper non-empty subset");
        }
        let b = (0..n).filter(|q| !a.contains(q)).collect();
        Ok((a, b))
    }

    fn sub_index(&self, index: usize, qubits: &[usize]) -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| acc << 1 | bit(index, self.n_qubits, q))
    }

    /// Schmidt coefficients across `party_a | rest`, descending.
    pub fn schmidt(&self, party_a: &[usize]) -> Result<Vec<f64>> {
        let v = self.vector("Schmidt decomposition")?;
        let (a, b) = self.party_split(party_a)?;
        let mut m = DMatrix::from_element(1 << a.len(), 1 << b.len(), ZERO);
        for (i, &amp) in v.iter().enumerate() {
            m[(self.sub_index(i, &a), self.sub_index(i, &b))] = amp;
        }
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(|x, y| y.total_cmp(x));
        Ok(s)
    }

    /// Reduced state after tracing out `parties`.
    pub fn trace_out(&self, parties: &[usize]) -> Result<QubitState> {
        let (gone, keep) = self.party_split(parties)?;
        let rho = self.density_matrix();
        let dk = 1 << keep.len();
        let mut out = DMatrix::from_element(dk, dk, ZERO);
        for i in 0..rho.nrows() {
            for j in 0..rho.ncols() {
                if self.sub_index(i, &gone) == self.sub_index(j, &gone) {
                    out[(self.sub_index(i, &keep), self.sub_index(j, &keep))] += rho[(i, j)];
                }
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            repr: Repr::Mixed(out),
        })
    }

    /// Eigenvalues of the density matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigs(self.density_matrix())
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-15)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// Entropy of the reduced state of `party_a` for a pure global state.
    pub fn entanglement_entropy(&self, party_a: &[usize]) -> Result<f64> {
        Ok(self
            .schmidt(party_a)?
            .into_iter()
            .map(|s| s * s)
            .filter(|&p| p > 1e-15)
            .map(|p| -p * p.log2())
            .sum())
    }

    /// Projects qubit 0 onto `(|0⟩ ± |1⟩)/√2` and renormalizes.
    pub fn measure_ghz_conjugate(&self, outcome: Outcome) -> Result<Measurement> {
        let v = self.vector("conjugate-basis measurement")?;
        let half = v.len() / 2;
        let sign = outcome.sign();
        // amplitude of the rest given the projected first qubit
        let rest: Vec<Complex64> = (0..half)
            .map(|k| (v[k] + sign * v[half + k]) * FRAC_1_SQRT_2)
            .collect();
        let probability: f64 = rest.iter().map(|z| z.norm_sqr()).sum();
        if probability < STATE_TOL {
            return invalid("outcome has zero probability");
        }
        let norm = probability.sqrt();
        let mut post = vec![ZERO; v.len()];
        for (k, z) in rest.iter().enumerate() {
            post[k] = z * FRAC_1_SQRT_2 / norm;
            post[half + k] = z * sign * FRAC_1_SQRT_2 / norm;
        }
        Ok(Measurement {
            probability,
            state: Self::pure(self.n_qubits, post)?,
        })
    }

    /// `|⟨self|other⟩|` for pure states.
    pub fn overlap(&self, other: &QubitState) -> Result<f64> {
        let a = self.vector("overlap")?;
        let b = other.vector("overlap")?;
        if a.len() != b.len() {
            return invalid("overlap of states with different qubit counts");
        }
        Ok(a.dotc(b).norm())
    }
}

fn sorted_eigs(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Eigenvalues of the partial transpose on the second qubit of a two-qubit
/// state, ascending. A negative value proves entanglement.
pub fn partial_transpose_eigs(state: &QubitState) -> Result<Vec<f64>> {
    if state.n_qubits() != 2 {
        return invalid(format!(
            "partial transpose expects 2 qubits, got {}",
            state.n_qubits()
        ));
    }
    let rho = state.density_matrix();
    let pt = DMatrix::from_fn(4, 4, |i, j| {
        let (a, b) = (i >> 1, i & 1);
        let (c, d) = (j >> 1, j & 1);
        rho[(a << 1 | d, c << 1 | b)]
    });
    Ok(sorted_eigs(pt))
}
