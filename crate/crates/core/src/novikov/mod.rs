//! Exact truncated Novikov series, λ-polynomial scalars and multivariate power series.

mod exponent;
mod multi;
mod scalar;
mod series;

pub use exponent::Exponent;
pub use multi::{reversion_triangular, MultiSeries};
pub use scalar::{parse_rational, rat, EquivariantScalar, Monomial, Scalar};
pub use series::{NovikovSeries, DEFAULT_LAMBDA_CAP};

pub(crate) use scalar::{join_signed, parse_lambda as parse_lambda_factor, split_signed};
