pub mod error;
pub mod cli;
pub mod curvespace;
pub mod experiments;
pub mod form;
pub mod heuristics;
pub mod hunt;
pub mod pointsearch;

pub use error::{Error, Result};
pub use form::{integer_sqrt_if_square, CurveStats, PrimitiveXCoord, RationalPoint, SexticForm};
