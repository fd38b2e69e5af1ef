//! Seedable Monte Carlo oracle for `X + Y`.
//!
//! Samples are produced in fixed-size chunks, each from its own ChaCha
//! stream keyed by `(seed, chunk index)`, and reduced in chunk order, so
//! every estimate is bit-identical whatever the number of worker threads.

mod estimators;
mod rng;
mod sampler;

pub use estimators::{
    empirical_tailprob, empirical_var, tailprob_sweep, var_sweep, write_pairs_csv, MCEstimate,
};
pub use sampler::{sample_pairs, sample_sums, SimulationConfig, DEFAULT_CHUNK};
