pub mod cli;
pub mod data;
pub mod dist;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod predictors;
pub mod rng;

pub use error::{Error, Result};
