//! Generalized degrees of freedom (GDoF) of linear schemes over K-user
//! interference channels described only by their link strength exponents,
//! and the TIM-TIN baseline built on it.
//!
//! * [`model`]: channels, schemes, reports, decomposition maps.
//! * [`evaluator`]: exact GDoF of a scheme, its successive-cancellation
//!   split, and a finite-SNR floating-point cross-check.
//! * [`tin`]: power levels for treating interference as noise.
//! * [`tim`]: signal-space allocation on a binary topology.
//! * [`decomp`]: splitting a channel into the two components, combining
//!   their solutions, verifying, and searching over splits.
//!
//! All exponents and coordinates are exact rationals.
//!
//! ## Feature flags
//!
//! * `parallel` (default): evaluates independent work items (decompositions,
//!   oracle seeds, independent-set candidates) on the rayon pool. Without it
//!   everything runs sequentially with identical results.

pub mod decomp;
pub mod error;
pub mod evaluator;
pub mod fixtures;
pub mod json;
pub mod linalg;
pub mod model;
pub mod par;
pub mod rational;
pub mod tim;
pub mod tin;

pub use error::{Error, Result};
pub use model::{ChannelMatrix, Component, DecompositionMap, GdofReport, Link, Scheme, Stream, UserGdof};
pub use rational::Rational;
