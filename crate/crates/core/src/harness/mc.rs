use rayon::prelude::*;

use super::scaling::{AffineMap, Model, Resolved, ScalingSpec};
use crate::distributions::DistributionTable;
use crate::sampler::{longest_weak_chain, lpp_last_passage, sample_lpp, sample_png_config};
use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 100;

/// Scaled Monte Carlo sample with its moments.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfSummary {
    pub model: Model,
    pub spec: ScalingSpec,
    pub seed: u64,
    pub map: AffineMap,
    /// Raw observables in sample-index order.
    pub raw: Vec<u64>,
    /// Scaled values, ascending.
    pub samples: Vec<f64>,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub raw_mean: f64,
    pub raw_variance: f64,
}

/// One realisation of the raw observable: `L(t)` or the lattice
/// last-passage time without the corner weight.
pub fn draw_raw(resolved: &Resolved, seed: u64, index: u64) -> Result<u64> {
    match *resolved {
        Resolved::Png { t, alpha_plus, alpha_minus } => {
            let cfg = sample_png_config(t, alpha_plus, alpha_minus, seed, index)?;
            Ok(longest_weak_chain(&cfg) as u64)
        }
        Resolved::Lpp { n, q, alpha_plus, alpha_minus } => {
            let inst = sample_lpp(n, q, alpha_plus, alpha_minus, seed, index)?;
            lpp_last_passage(&inst, false)
        }
    }
}

/// Mean and unbiased variance, summed in slice order.
fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, if xs.len() > 1 { ss / (n - 1.0) } else { 0.0 })
}

/// Draws samples `0..samples` in parallel on the current rayon pool and
/// scales them. The result does not depend on the number of workers.
pub fn run_mc(model: Model, spec: &ScalingSpec, samples: usize, seed: u64) -> Result<EcdfSummary> {
    if spec.regime.model() != model {
        return Err(Error::Parameter(format!("regime {} does not apply to model {model}", spec.regime)));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Parameter(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let resolved = spec.resolve()?;
    let map = spec.affine_map()?;
    let raw: Vec<u64> =
        (0..samples as u64).into_par_iter().map(|i| draw_raw(&resolved, seed, i)).collect::<Result<_>>()?;

    let raw_f: Vec<f64> = raw.iter().map(|&r| r as f64).collect();
    let (raw_mean, raw_variance) = moments(&raw_f);
    let mut scaled: Vec<f64> = raw_f.iter().map(|&r| map.apply(r)).collect();
    let (mean, variance) = moments(&scaled);
    scaled.sort_by(f64::total_cmp);
    Ok(EcdfSummary {
        model,
        spec: spec.clone(),
        seed,
        map,
        raw,
        samples: scaled,
        count: samples,
        mean,
        variance,
        raw_mean,
        raw_variance,
    })
}

/// `sup_x |ECDF(x) − F(x)|` for sorted samples and a continuous `F`.
///
/// At each distinct sample value the empirical CDF jumps from `below` to
/// `above`; both one-sided gaps are checked there, so tied samples count as
/// one jump.
pub fn ks_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max(j as f64 / n - f).max(f - i as f64 / n);
        i = j;
    }
    d
}

pub fn ks_distance(ecdf: &EcdfSummary, dt: &DistributionTable) -> f64 {
    ks_sorted(&ecdf.samples, |x| dt.cdf_at(x))
}
