//! Statistics of projection probabilities for Haar-random orthonormal frames.
//!
//! Draw random elements of the orthogonal group O(N) or the unitary group
//! U(N) with the normalized Haar measure, project their column vectors onto a
//! fixed K-dimensional subspace, and study the squared projection norms
//! `t_1, ..., t_R`. The crate provides
//!
//! - exact sampling of Haar frames and of the projection probabilities
//!   ([`sampling`]),
//! - analytic one-point and two-point joint densities of the `t_xi`, via
//!   closed forms, a numeric residue engine, and adaptive quadrature of the
//!   remaining contour integral ([`analytic`]),
//! - the distribution of the two-terminal Landauer conductance
//!   `g = sum of partial conductances` for scattering matrices drawn from
//!   U(N) ([`conductance`]),
//! - histogram estimation and goodness-of-fit comparison of Monte Carlo
//!   against the analytic densities ([`montecarlo`]),
//! - the self-contained special functions the densities are built from
//!   ([`special`]).
//!
//! Start with the runnable programs under `examples/`; each one demonstrates
//! a single capability end to end. A thin command-line binary (`haarproj`)
//! exposes the same operations as the `sample`, `density`, `compare` and
//! `conductance` subcommands.

pub mod analytic;
pub mod cli;
pub mod conductance;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
pub use sampling::{EnsembleKind, FrameSample, JointSample, ProjectionConfig};

/// Crate version string embedded in all output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
