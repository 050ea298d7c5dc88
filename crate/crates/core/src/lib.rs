//! Spectral statistics of flat tori.
//!
//! The crate covers four loosely coupled areas:
//!
//! * [`shape`] and [`spectrum`]: binary quadratic forms and the normalized,
//!   desymmetrized Laplace spectrum of the associated flat torus.
//! * [`correlations`] and [`gaps`]: pair and triple correlations, gap
//!   distributions and the elementary inequalities tying them together.
//! * [`poisson_seq`], [`measure`] and [`solver`]: the bounded-gap sequence
//!   with Poissonian pair correlation, Monte Carlo averages over the
//!   hyperbolic measure on shapes, and the long-gap constant.
//! * [`diophantine`]: exact integer machinery for the 8-tuple counting
//!   problem behind the averaged triple correlation.

pub mod correlations;
pub mod diophantine;
pub mod error;
pub mod gaps;
pub mod measure;
pub mod poisson_seq;
pub mod shape;
pub mod solver;
pub mod spectrum;

mod quad;

pub use error::{Error, Result};
pub use shape::TorusShape;
pub use spectrum::{Desymmetrization, NormalizedSpectrum};
