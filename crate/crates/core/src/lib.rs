//! netcap-core: dual-engine toolkit for limited-feedback zero-forcing SDMA in
//! Poisson wireless networks.

pub mod analytics;
pub mod design;
pub mod error;
pub mod montecarlo;
pub mod params;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result, Violation};
pub use params::{
    db_to_linear, linear_to_db, quantization_error_bound, validate, BoundSet, DerivedScalars,
    FeedbackBits, NetworkParams, QuantizationScheme,
};
