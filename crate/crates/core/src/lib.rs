pub mod ainfinity;
pub mod error;
pub mod hpt;
pub mod lattice;
pub mod linalg;
pub mod novikov;
pub mod toric;
pub mod trimodule;

pub use error::{Error, Result};
pub use novikov::{Exponent, MultiSeries, NovikovSeries, Scalar};
