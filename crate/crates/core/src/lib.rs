//! Second-order tail asymptotics for the sum of two dependent heavy-tailed
//! risks, with a Monte Carlo oracle to check them against.

pub mod asymptotics;
pub mod copulas;
pub mod error;
pub mod exec;
pub mod marginals;
pub mod montecarlo;
pub mod quad;

pub use error::{Error, Result};
