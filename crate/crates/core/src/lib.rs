//! Closed-form error-function approximants with exact rational
//! coefficients, a high-precision reference, and certification sweeps.

pub mod approx;
pub mod cli;
pub mod error;
pub mod exact;
pub mod grid;
pub mod oracle;
pub mod series;
pub mod signal;
pub mod spline;
pub mod sqrt;
pub mod subinterval;
pub mod tables;
pub mod transition;

pub use approx::{Approximant, Evaluator};
pub use error::{Error, Result};
pub use oracle::PrecisionContext;
