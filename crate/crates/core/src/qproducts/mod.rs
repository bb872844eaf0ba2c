//! Product notations, the expression language, and its evaluator.

pub mod eta;
pub mod eval;
pub mod expr;
pub mod parse;
pub mod products;

use thiserror::Error;

pub use eta::{p2, GeneralizedEtaProduct, Monomial};
pub use eval::{linear_combination, to_generalized_eta, Evaluator, Resolver};
pub use expr::QExpr;
pub use parse::{parse, ParseError};
pub use products::{bracket, euler_product, jab, theta};

use crate::lambert::LambertError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lambert(#[from] LambertError),
    #[error("total power of q is not an integer: {0}")]
    NonIntegralPower(String),
    #[error("modulus {modulus} does not divide the level {level}")]
    LevelMismatch { modulus: u64, level: u64 },
    #[error("not a monomial: {0}")]
    NotMonomial(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("bad call {0}")]
    BadCall(String),
    #[error("could not reach precision {0}")]
    PrecisionLoss(i64),
    #[error("{what} exceeds the enumeration guard {guard}")]
    ResourceLimit { what: String, guard: u32 },
}
