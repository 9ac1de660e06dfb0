pub mod error;
pub mod params;
pub mod roots;
pub mod special;
pub mod green;
pub mod quad;
pub mod defint;
pub mod coeffs;
pub mod oracle;
pub mod dynamics;
pub mod cli;

pub use error::{Error, Result};
