//! Numerical harmonic analysis for Hardy-Cesaro/Bellman averages of Fourier
//! transforms: piecewise-constant grid functions, rearrangement, Lorentz and
//! net-space norms, truncated transforms, and a harness that evaluates both
//! sides of weighted Fourier inequalities at desk scale.

pub mod atoms;
pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod grid;
pub mod fourier;
pub mod hardy;
pub mod harness;
pub mod netspace;
pub mod rearrange;
pub mod special;

pub use error::{Error, Result};
pub use grid::{Axis, GridFunction, WeightedNormSpec};
pub use num_complex::Complex64;
