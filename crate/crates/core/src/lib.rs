//! Simulation and verification toolkit for Bell inequalities on two-photon
//! hyper-entangled states (polarization and path).
//!
//! The crate is organized bottom-up:
//!
//! * [`qcore`]: dense complex vectors and matrices, tensor products,
//!   expectation values and the extremal eigenvalue.
//! * [`model`]: basis conventions, the hyper-entangled state, the eight local
//!   observables and the visibility noise channels.
//! * [`bell`]: CHSH operators for each degree of freedom, their tensor
//!   products and the quantum/classical scaling report.
//! * [`lhv`]: exhaustive classical bounds over deterministic local strategies.
//! * [`simlab`]: Born-rule distributions, seeded sampling, estimators,
//!   context-independence tests and violation significance.
//! * [`cli`]: configuration, study runner and report serialization used by
//!   the `hyperbell` binary.

pub mod bell;
pub mod cli;
pub mod error;
pub mod lhv;
pub mod model;
pub mod qcore;
pub mod simlab;

pub use error::{Error, Result};
