//! Plancherel random partitions near the edge.
//!
//! The crate covers four layers:
//!
//! * [`partition`] and [`dynamics`]: partitions, Plancherel sampling, the
//!   corner-removal decay chain and rescaled edge trajectories.
//! * [`group_algebra`] and [`chebyshev`]: exact traces of Jucys–Murphy words
//!   in the regular representation of `S_n` and the polynomial family `P_l^n`.
//! * [`paths`] and [`diagrams`]: transposition lists, their paths, contraction
//!   to metric diagrams and exhaustive diagram generation.
//! * [`airy`]: diagram polytopes, the series `ψ`, the Laplace transform `φ`
//!   and Monte Carlo estimators of the edge functionals.
//!
//! [`cli`] holds the configuration and report plumbing behind the binary.

pub mod airy;
pub mod chebyshev;
pub mod cli;
pub mod diagrams;
pub mod dynamics;
pub mod error;
pub mod group_algebra;
pub mod partition;
pub mod paths;
pub mod quadrature;
pub mod rng;
pub mod surd;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
