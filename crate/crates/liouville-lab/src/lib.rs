//! A numerical verification laboratory for the planar equation
//!
//! ```text
//! −Δu = e^{au} + |x|^{2N} e^u   in ℝ²,
//! ```
//!
//! covering radial shooting with tail-corrected masses, the Pohozaev mass
//! identities, catalogs of admissible blow-up masses, the conical-sphere
//! reduction with its Troyanov conditions, balance conditions for blow-up
//! point configurations, and an explicit non-radial concentrating family.
//!
//! Modules:
//!
//! - [`regime`]: parameters, regime cells, necessary bounds, mass splits.
//! - [`radial`]: radial solver, masses, local Pohozaev identity, sweeps.
//! - [`catalog`]: blow-up mass formulas, ranges and enumeration.
//! - [`geometry`]: cone angles, Gauss–Bonnet budget and Troyanov checks.
//! - [`polygon`]: balance equations and regular-polygon characterization.
//! - [`example`]: the explicit concentrating family and its measurements.
//! - [`cli`]: the batch front-end behind the `liouville-lab` binary.
//! - [`verify`]: the quantitative verification suites.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod example;
pub mod geometry;
mod ode;
pub mod polygon;
pub mod quad;
pub mod radial;
pub mod regime;
pub mod verify;

pub use error::{Error, Result};
