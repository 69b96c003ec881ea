//! Computational models of the analytic line over ℂ.
//!
//! * [`series`]: truncated weighted series with certified ℓ¹ norms;
//! * [`rings`]: overconvergent, holomorphic and outer-tail rings, the
//!   Laurent splitting, division by `T - U`, variable inversion and the
//!   duality pairing;
//! * [`berkovich`]: evaluation points of one-variable algebras and rational
//!   subsets;
//! * [`region`]: the region lattice of the line and its sampled axiom suite;
//! * [`huber`]: discrete Huber pairs, valuations, rational localizations and
//!   covers.

pub mod berkovich;
pub mod certified;
pub mod cli;
pub mod config;
pub mod error;
pub mod huber;
pub mod literal;
pub mod plot;
pub mod poly;
pub mod random;
pub mod region;
pub mod roots;
pub mod rings;
pub mod scalar;
pub mod selftest;
pub mod series;

pub use error::{Backend, Error, Result};
pub use poly::Poly;
pub use scalar::{GaussRat, Real, Scalar};
pub use series::{NormValue, Truncation, WeightedSeries};
