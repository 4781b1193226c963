//! Solvers and certifiers for the weak-core and alpha-core of normal-form
//! games with many players.
//!
//! - [`finite`]: finite NTU games, exhaustive blocking search, `V(S)`.
//! - [`continuum`]: games on the player interval `[0,1]`, step profiles,
//!   discretization into finite games and the limit pipeline.
//! - [`fixtures`]: closed-form continuum payoffs built from running
//!   averages, with their constructive blockers.
//! - [`anonymous`]: distribution-form games over four actions and the
//!   blocking-cycle demonstrator.

pub mod anonymous;
pub mod continuum;
pub mod error;
pub mod finite;
pub mod fixtures;
pub mod par;
pub mod scalar;

pub use error::{Error, Result};
pub use par::Execution;
pub use scalar::{Rational, Scalar};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
