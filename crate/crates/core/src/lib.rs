pub mod bernoulli;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod factory;
pub mod gauss;
pub mod lattice;
pub mod parse;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod theta;

pub use error::{Error, Result};
