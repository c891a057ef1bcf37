//! Single-mode parabose oscillator toolkit.
//!
//! A parabose oscillator of order `p` generalizes the harmonic oscillator:
//! the ladder operators obey `[a, a†] = 1 + (p − 1)R` with `R` the parity
//! (reflection) operator, and the number states carry deformed weights
//! `[n] = n` for even `n`, `[n] = n + p − 1` for odd `n`. Everything in this
//! crate is built on top of that bracket.
//!
//! The crate provides four layers:
//!
//! * [`algebra`] — the bracket, deformed exponential, truncated Fock-space
//!   matrices for the ladder operators, and coherent states;
//! * [`polynomials`] — exact rational arithmetic for the deformed Hermite and
//!   Legendre polynomial families (closed sums, recursions, Rodrigues-type
//!   constructions, generating function, differential equations);
//! * [`squeeze`] — the two-photon squeeze operator, its normal-ordered
//!   (disentangled) factorization, squeezed number states in closed form, and
//!   excitation norms;
//! * [`amplifier`] — a degenerate parametric amplifier: Hamiltonians in the
//!   Schrödinger and interaction pictures, adaptive time evolution, and an
//!   analytic coherent-state propagator to test against.
//!
//! [`report`] wires the individual identity checks into named, machine-readable
//! suites; the `parabose` binary exposes them on the command line.
//!
//! # Numerical ground rules
//!
//! All matrix computations live in a Fock space truncated to dimension `N`.
//! Truncation corrupts the top of the space, so every comparison carries a
//! guard band `G`: residuals are measured on the leading `N − G` rows/columns
//! only, and operations that would populate the guard band beyond a tolerance
//! return [`Error::TruncationInadequate`] with the dimension that would
//! suffice. Routines that need more headroom than the caller's `N` (squeezed
//! states, two-path operator comparisons) enlarge the space internally and
//! project back, so the returned objects are accurate on all `N` retained
//! levels, not merely the guarded ones.

pub mod algebra;
pub mod amplifier;
pub mod error;
pub mod linalg;
pub mod ode;
pub mod polynomials;
pub mod report;
pub mod squeeze;

pub use error::{Error, Result};

/// Default truncated Fock-space dimension.
pub const DEFAULT_DIM: usize = 64;

/// Default comparison tolerance for floating-point identity checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Default relative/absolute tolerance for adaptive time integration.
pub const DEFAULT_ODE_TOL: f64 = 1e-10;

/// Default parabose order.
pub const DEFAULT_P: u32 = 2;

/// Default guard band for a given dimension: `max(2, dim / 8)`.
pub fn default_guard(dim: usize) -> usize {
    (dim / 8).max(2)
}
