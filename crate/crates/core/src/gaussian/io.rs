use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::GaussianState;
use crate::error::{Error, Result};

/// Value of the `convention` field; other conventions are rejected on read.
pub const CONVENTION: &str = "hbar=1/2";

/// On-disk JSON form of a [`GaussianState`], row-major covariance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateDocument {
    pub convention: String,
    pub n_modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl From<&GaussianState> for StateDocument {
    fn from(s: &GaussianState) -> Self {
        let cov = s.cov();
        Self {
            convention: CONVENTION.to_string(),
            n_modes: s.n_modes(),
            mean: s.mean().iter().copied().collect(),
            cov: (0..cov.nrows())
                .map(|i| cov.row(i).iter().copied().collect())
                .collect(),
        }
    }
}

impl TryFrom<StateDocument> for GaussianState {
    type Error = Error;

    fn try_from(doc: StateDocument) -> Result<Self> {
        if doc.convention != CONVENTION {
            return Err(Error::Format(format!(
                "unsupported convention {:?}, expected {CONVENTION:?}",
                doc.convention
            )));
        }
        let dim = 2 * doc.n_modes;
        if doc.n_modes == 0 || doc.mean.len() != dim || doc.cov.len() != dim {
            return Err(Error::Format(format!(
                "n_modes = {} needs a mean of length {dim} and {dim} covariance rows",
                doc.n_modes
            )));
        }
        if let Some(row) = doc.cov.iter().find(|r| r.len() != dim) {
            return Err(Error::Format(format!(
                "covariance row has {} entries, expected {dim}",
                row.len()
            )));
        }
        let cov = DMatrix::from_fn(dim, dim, |i, j| doc.cov[i][j]);
        GaussianState::new(doc.mean, cov)
    }
}

impl GaussianState {
    pub fn to_json(&self) -> Result<String> {
        if self
            .mean()
            .iter()
            .chain(self.cov().iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::Format("refusing to write non-finite values".into()));
        }
        Ok(serde_json::to_string_pretty(&StateDocument::from(self))?)
    }

    /// Parses and re-validates symmetry and physicality.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDocument = serde_json::from_str(text)?;
        doc.try_into()
    }
}
