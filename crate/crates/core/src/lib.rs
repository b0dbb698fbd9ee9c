//! Exact tropical toric maximum likelihood estimation.

pub mod cli;
pub mod critical;
pub mod error;
pub mod linalg;
pub mod matroid;
pub mod model;
pub mod subdivision;
pub mod subset;
pub mod tips;
pub mod tropical;

pub use error::{Error, Result};
