//! Exact representation theory of quantum sl(2|1) at a root of unity.

pub mod braid;
pub mod catops;
pub mod charb;
pub mod error;
pub mod linalg;
pub mod mtrace;
pub mod report;
pub mod repmod;
pub mod scalar;
pub mod sixjtv;
pub mod verify;

pub use error::{Error, Result};
