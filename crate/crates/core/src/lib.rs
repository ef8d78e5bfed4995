//! Copositivity of sparse Laurent polynomials.

pub mod certify;
pub mod cli;
pub mod decide;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod numeric;
#[cfg(any(test, feature = "dev-oracles"))]
pub mod oracles;
pub mod signomial;
pub mod sonc;
pub mod tracker;

pub use error::{Error, Result};
