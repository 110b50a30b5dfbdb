//! Nonlinear modes of the Woinowsky-Krieger beam and their mutual stability.
//!
//! A `k`-th nonlinear mode `Θ_k(t) sin(kx)` of the beam under axial load `P`
//! solves the Duffing equation `Θ̈ + k²(k²−P)Θ + k⁴Θ³ = 0`. Two such modes
//! interact through a cubic coupling; whether energy leaks from a large mode
//! `m` into a small mode `n` is decided by a Hill equation whose coefficient
//! is built from `Θ_m`.
//!
//! Modules, bottom-up:
//!
//! - [`special`]: complete elliptic integral `K`, the constant `σ`, and the
//!   comparison functions behind the uniform stability bound.
//! - [`integrate`]: adaptive Dormand–Prince 5(4) with dense output and zero
//!   crossing detection.
//! - [`duffing`]: energies, amplitudes, periods and trajectories of single modes.
//! - [`hill`]: Hill coefficient, monodromy matrix and the classical criteria.
//! - [`two_mode`]: the coupled two-mode system and its energy channels.
//! - [`regime`]: frequency-ratio classes, resonance diagnostics, the summary
//!   table, and the large-energy limit map.
//! - [`stationary`]: equilibrium shapes of the compressed beam.
//! - [`atlas`]: parallel parameter sweeps and threshold bisection.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atlas;
pub mod duffing;
mod error;
pub mod hill;
pub mod integrate;
pub mod quadrature;
pub mod regime;
pub mod special;
pub mod stationary;
pub mod two_mode;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};
