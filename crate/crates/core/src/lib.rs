//! Gaussian-state toolkit for multipartite continuous-variable entanglement.
//!
//! - [`gaussian`]: moments, symplectic maps, Wigner functions, entropies.
//! - [`circuits`]: beam-splitter networks that build the multimode states.
//! - [`criteria`]: separability tests on covariance matrices.
//! - [`nonlocality`]: displaced-parity correlations and Mermin–Klyshko sums.
//! - [`qubit`]: a dense qubit reference used as an independent oracle.

pub mod circuits;
pub mod criteria;
pub mod error;
pub mod gaussian;
pub mod nonlocality;
pub mod qubit;

pub use error::{Error, Result};
pub use gaussian::{GaussianState, PhaseSpacePoint, SqueezeAxis, SymplecticOp};

// The guide in `book/` is compiled here so its snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gaussian.md")]
    mod gaussian {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/nonlocality.md")]
    mod nonlocality {}
    #[doc = include_str!("../../../book/src/qubit.md")]
    mod qubit {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
