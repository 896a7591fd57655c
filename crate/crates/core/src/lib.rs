#![no_std]
#![warn(missing_docs)]

//! Droop reconstruction and expected-path estimators for open systems.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`norm`]: the power-of-two norming into `(π/2, π]` and the droops built on it,
//! * [`path`]: the log-droop path estimator and the two total-path combinators,
//! * [`spectra`]: first-kind integral inversion of deviation series and the actual droop,
//! * [`resonance`], [`correlation`], [`balance`]: the three expected-droop mechanisms,
//! * [`poisson`]: the Poisson GLM used by the balance mechanism,
//! * [`linalg`]: the small dense least-squares kernel both solvers share.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod balance;
pub mod correlation;
mod error;
pub mod linalg;
pub mod norm;
pub mod path;
pub mod poisson;
pub mod resonance;
pub mod spectra;

pub use error::{Error, Result};
pub use norm::{droops_from_potential, norm0, stochastic_step, NormedValue};
pub use path::{
    path_estimate, total_euclidean, total_ropelength, Mechanism, PathEstimate, TotalPathReport,
};
