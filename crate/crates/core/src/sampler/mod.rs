//! Monte Carlo realisations of the three discrete models.
//!
//! Every sampler is a pure function of `(seed, index)`: the generator for a
//! sample is rebuilt from those two numbers, so replicates can be produced
//! in any order and on any number of threads.

mod lpp;
mod png;
mod rng;
mod tasep;

pub use lpp::{lpp_last_passage, sample_lpp, LppInstance};
pub use png::{longest_weak_chain, longest_weak_chain_witness, sample_png_config, PointConfiguration};
pub use rng::{sample_stream, Lane};
pub use tasep::{tasep_run, write_trajectory_csv, Tasep, TasepParams, TasepState, UpdateRule};

use std::io::Write;

/// Writes `sample_index,value` rows, indices counted from `first_index`.
pub fn write_samples_csv<W: Write + ?Sized, T: std::fmt::Display>(
    out: &mut W,
    first_index: u64,
    values: &[T],
) -> std::io::Result<()> {
    writeln!(out, "sample_index,value")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(out, "{},{}", first_index + k as u64, v)?;
    }
    Ok(())
}
