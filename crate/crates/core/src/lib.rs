//! Nonlinear flip-flop discrete-time quantum walks through potential
//! barriers.
//!
//! A walker with a two-level coin lives on a one-dimensional lattice. Each
//! step applies an intensity-dependent (Kerr-like) phase, a coin
//! `cos(theta) Z + sin(theta) X`, and a flip-flop shift that hops with
//! amplitude `cos(phi)` and stays put with amplitude `i sin(phi)`.
//!
//! Modules:
//!
//! - [`state`]: the spinor wavefunction and site probabilities
//! - [`evolution`]: operators, stepping and a dense-matrix reference
//! - [`observables`]: participation function, survival probability, fits
//! - [`analysis`]: phase-diagram sweeps, regime labels, critical barrier
//! - [`fiberloop`]: the coupled fiber-loop pulse map
//! - [`cli`]: configuration and file output behind the `nlwalk` binary

pub mod analysis;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod fiberloop;
pub mod observables;
pub mod state;

pub use error::{Result, WalkError};
pub use evolution::{step, Boundary, CoinMatrix, KerrMode, ShiftParams, WalkParams};
pub use state::{SiteProbability, WalkerState};
