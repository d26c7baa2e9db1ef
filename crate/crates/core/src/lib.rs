pub mod acceptance;
pub mod analyzer;
pub mod bv;
pub mod engine;
pub mod error;
pub mod gallery;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::ExactScalar;
