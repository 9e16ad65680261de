pub mod category;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod family;
pub mod harness;
pub mod relation;
pub mod report;
pub mod setoid;

pub use error::{Error, Result};
pub use report::Report;
