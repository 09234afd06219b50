//! Problem data: the enthalpy law, boundary and initial data, and mollification.

mod data;
mod enthalpy;
mod hypotheses;
pub mod io;
mod mollify;

use thiserror::Error;

pub use data::{BoundaryData, DataBounds, DataFunction, InitialData, Piecewise};
pub use enthalpy::Enthalpy;
pub use hypotheses::{validate_hypotheses, Hypothesis, ValidationReport, Violation};
pub use mollify::{kernel, mollify, Mollifier};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("regularization index must be at least 1")]
    InvalidRegularization,
    #[error("amplitude bounds must satisfy 0 < lower <= upper, got {lower} and {upper}")]
    InvalidBounds { lower: f64, upper: f64 },
    #[error("data function needs at least one knot")]
    EmptyData,
    #[error("knot {index} is not finite")]
    NonFinite { index: usize },
    #[error("knot {index} is left of its predecessor")]
    UnsortedKnots { index: usize },
    #[error("more than two knots share abscissa {at}")]
    RepeatedJump { at: f64 },
    #[error("mollifier width must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("mollifier width {epsilon} is not smaller than the data domain length {length}")]
    EpsilonTooLarge { epsilon: f64, length: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
