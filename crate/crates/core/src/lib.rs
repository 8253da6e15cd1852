//! Spectral simulation and analysis of perturbation growth for 2D
//! Euler/Navier–Stokes on the periodic box.
//!
//! * [`spectral`]: Fourier fields, Sobolev norms, Leray projection, dealiased products.
//! * [`theorem`]: translation-family derivative of the solution operator and divergence scans.
//! * [`solver`]: pseudo-spectral vorticity solver and checkpoint I/O.
//! * [`tangent`]: linearized dynamics, amplification curves, remainder experiments.
//! * [`oracles`]: closed-form heat, Couette and exact-family solutions.
//! * [`growth`]: growth-law fits, envelope checks, Reynolds sweeps.
//! * [`cli`]: the `roughdep` command-line front end.

pub mod cli;
pub mod error;
pub mod growth;
pub mod oracles;
pub mod recipes;
pub mod solver;
pub mod spectral;
pub mod tangent;
pub mod theorem;

pub use error::{Error, Result};
pub use solver::{Reynolds, SimulationState, SolverConfig};
pub use spectral::{FieldKind, NormConvention, SpectralField, WaveVector};
