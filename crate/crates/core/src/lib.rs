//! Numerical laboratory for one-dimensional weighted metric measure spaces.
//!
//! The crate builds interval and circle model spaces carrying nonnegative
//! densities h (possibly vanishing at interval endpoints), and provides
//!
//! * distortion coefficients and the sigma-weighted convexity test for
//!   log-densities, plus the two-sided sinh ratio bounds ([`convexity`]),
//! * ball measures m(B_r(x)), the ratio integral ∫ r/m(B_r(x)) dm with its
//!   r→0 extrapolation, and the uniform domination bound ([`measure`]),
//! * the weighted Neumann Laplacian as a P1 finite-element generalized
//!   eigenproblem, eigenvalue counting and heat traces ([`spectral`]),
//! * growth-exponent fitting, heat-trace lower-bound checks and the Abelian
//!   theorem on synthetic measures ([`harness`]).
//!
//! All computations are deterministic; spaces and spectra are immutable
//! after construction and safe to share across threads.

pub mod concurrency;
pub mod convexity;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod harness;
pub mod measure;
pub mod quad;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
