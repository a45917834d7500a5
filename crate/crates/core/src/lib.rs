pub mod cli;
pub mod covariance;
pub mod error;
pub mod grid;
pub mod operators;
pub mod oracle;
pub mod polarization;
pub mod products;
pub mod state;
pub mod synthesis;
pub mod sum;

pub use error::{Error, Result};
