//! Exact arithmetic, N-paths, inductive valuations and minimal resolution
//! graphs for wild quotient singularities.

pub mod classification;
pub mod contfrac;
pub mod error;
pub mod graph;
pub mod io;
pub mod maclane;
pub mod npath;
pub mod numeric;
pub mod resolution;

pub use error::{Error, ErrorKind, Result};
pub use numeric::Rational;
