//! Exact homomorphism densities, positivity certificates, hypergraph
//! quasirandomness gadgets, higher-order tournaments and graph-code spectra.
//!
//! Every quantity that ends up in a certificate is computed in exact rational
//! arithmetic. Floating point is confined to the optimizer, the Monte Carlo
//! estimators and the dense Walsh–Hadamard min-scan.

pub mod engine;
pub mod error;
pub mod graphcodes;
pub mod indpoly;
pub mod kernels;
pub mod quasi;
pub mod rational;
pub mod rng;
pub mod sidorenko;
pub mod structures;
pub mod tournaments;

pub use error::{Error, Result};
pub use kernels::StepKernel;
pub use rational::Rational;
pub use structures::Hypergraph;
