pub mod cli;
pub mod model;
pub mod scenario;
pub mod sim;
pub mod units;
pub mod workload;

mod error;

pub use error::{Error, Result};
