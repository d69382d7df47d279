//! Stable plane-wave approximation of solutions of the 2D Helmholtz equation
//! `-Δu - κ²u = 0` on the unit disk (and a test triangle).
//!
//! The crate builds finite sets of *evanescent* plane waves
//! `x ↦ exp(iκ d(φ+iζ)·x)` whose parameters `(φ, ζ)` are drawn from a
//! Christoffel-function sampling density on the cylinder `[0,2π)×ℝ`, assembles
//! boundary-collocation systems against a target trace and solves them with an
//! ε-truncated SVD. Propagative plane-wave sets (`ζ = 0`, equispaced angles)
//! are provided as the unstable baseline: they cannot reach high-order
//! circular modes with bounded coefficients, while the sampled evanescent sets
//! can.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm`, so results are bit-reproducible across platforms. IO, CSV/JSON
//! reports and the command line live in the companion `wavesynth-cli` crate.
//!
//! Module map:
//! - [`bessel`]: integer-order Bessel functions `J_p`, `Y_0`, `H_0^{(1)}`
//!   with scaled (log-range) column evaluation for extreme orders;
//! - [`quadrature`]: Gauss–Legendre rules and adaptive Gauss–Kronrod on
//!   log-scaled integrands;
//! - [`modal`]: the circular-wave and Herglotz-polynomial bases, their
//!   normalization constants `β_p`, `α_p` and the coupling constants `τ_p`;
//! - [`waves`]: propagative/evanescent plane waves and their modal
//!   coefficients;
//! - [`sampling`]: the sampling density `ρ_N`, its CDF, inverse-CDF sampling
//!   and the deterministic/Sobol/random node generators;
//! - [`linalg`], [`svd`]: dense complex matrices and the Golub–Kahan SVD
//!   least-squares kernel;
//! - [`solver`]: wave sets, collocation assembly and the ε-truncated solve;
//! - [`scenarios`]: geometries, targets and the end-to-end experiment drivers.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bessel;
pub mod error;
pub mod linalg;
pub mod modal;
pub mod quadrature;
pub mod sampling;
pub mod scaled;
pub mod scenarios;
pub mod solver;
pub mod svd;
pub mod waves;

pub use error::{Error, Result};
pub use modal::{CylinderPoint, DiskContext, ModalVector};
// re-exports below are filled in as modules land
pub use waves::{EvanescentWave, PropagativeWave};
