//! Trajectory-wave ("V-function") description of a hydrogen-like atom.
//!
//! The crate covers the whole chain from physical constants to the
//! classification of wave nodes:
//!
//! * [`constants`] and [`state`]: atomic units and the scalar parameters of a
//!   bound state `(Z, n)`.
//! * [`free_motion`]: the plane wave `V = A cos(ω(x/v − t))` that carries a
//!   uniformly moving particle on one of its nodes.
//! * [`series`]: the terminating power series `u₊` of the radial equation
//!   `u'' + (k₀²α/(α − β₀²r) − k₀²) u = 0` and the quantization scan.
//! * [`wronskian`]: the decaying wave `u₋ = u₊ ∫ dr/u₊²`, evaluated with
//!   finite-part quadrature through every zero of `u₊`.
//! * [`nodes`]: zero loci of sampled waves, split into trajectory surfaces and
//!   plain zeros, plus node tracking for superpositions.
//! * [`oracle`]: independent checks (finite-difference residuals, inward
//!   shooting, closed-form energies).
//! * [`verify`] and [`cli`]: the verification suite and the command-line
//!   front end.
//!
//! All internal arithmetic is done in Hartree atomic units (ħ = mₑ = e = 1).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod fit;
pub mod free_motion;
pub mod nodes;
pub mod oracle;
pub mod output;
pub mod profile;
pub mod quadrature;
pub mod series;
pub mod state;
pub mod verify;
pub mod wronskian;

pub use constants::{Constants, SiFactors, UnitSystem};
pub use error::{Error, Result};
pub use nodes::{NodeKind, NodeReport};
pub use series::SeriesSolution;
pub use state::{AtomSpec, StateParams};
pub use wronskian::{BoundWave, RadialGrid};
