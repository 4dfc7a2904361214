//! Analytic torsion of even-dimensional bounded cones over closed manifolds.

pub mod error;
pub mod base_spectrum;
pub mod berezin_anomaly;
pub mod model_operators;
pub mod olver;
pub mod precision_math;
pub mod torsion;
pub mod zeta_engine;

pub use error::{Error, Result};
