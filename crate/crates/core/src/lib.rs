pub mod berge;
pub mod cli;
pub mod error;
pub mod hgraph;
pub mod spectral;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
