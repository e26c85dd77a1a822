pub mod catenoid;
pub mod cli;
pub mod error;
pub mod fermi;
pub mod mesh;
pub mod neck;
pub mod numeric;
pub mod report;
pub mod revolution;
pub mod s3;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};
