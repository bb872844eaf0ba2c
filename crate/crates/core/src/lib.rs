//! Exact q-series arithmetic for partition-statistic identities.

pub mod series;

pub use series::{LaurentSeries, SeriesError};
pub mod lambert;
pub mod qproducts;

#[cfg(test)]
pub(crate) fn ri(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}
pub mod partitions;
pub mod verifier;
pub mod modular;
