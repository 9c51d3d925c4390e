//! Explicit bounds for the zero-counting function of the Riemann zeta function:
//! computation of the constants, parameter search, and desk-scale verification
//! against zeros that are computed or ingested.

pub mod cli;
pub mod constants;
pub mod error;
pub mod optimize;
pub mod quad;
pub mod regions;
pub mod specfun;
pub mod study;
pub mod zeros;

pub use error::{Error, Result};
