//! Dual-RIS received space shift keying: channel simulation, Gaussian
//! approximation analytics and a seeded Monte Carlo engine.

pub mod analytic;
pub mod channel;
pub mod config;
pub mod emit;
pub mod error;
pub mod montecarlo;
pub mod moments;
mod quad;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
