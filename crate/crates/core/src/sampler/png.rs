use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::rng::{sample_stream, Lane};
use crate::{Error, Result};

/// Points in the open unit square plus the two edge sources.
///
/// Bottom points sit at `(x, 0)` and left points at `(0, y)`; only the free
/// coordinate is stored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub interior: Vec<(f64, f64)>,
    pub bottom: Vec<f64>,
    pub left: Vec<f64>,
}

impl PointConfiguration {
    pub fn len(&self) -> usize {
        self.interior.len() + self.bottom.len() + self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points in plane coordinates, edge points included.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.len());
        pts.extend_from_slice(&self.interior);
        pts.extend(self.bottom.iter().map(|&x| (x, 0.0)));
        pts.extend(self.left.iter().map(|&y| (0.0, y)));
        pts
    }
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> Result<usize> {
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| Error::Parameter(format!("Poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as usize)
}

/// Draws `P(t²)` interior points, `P(α₊t)` bottom-edge points and `P(α₋t)`
/// left-edge points, all uniform.
pub fn sample_png_config(
    t: f64,
    alpha_plus: f64,
    alpha_minus: f64,
    seed: u64,
    index: u64,
) -> Result<PointConfiguration> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("t must be positive, got {t}")));
    }
    for (name, a) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Parameter(format!("{name} must be nonnegative, got {a}")));
        }
    }
    let mut rng = sample_stream(seed, index, Lane::Points);
    let n_int = poisson_count(&mut rng, t * t)?;
    let n_bot = poisson_count(&mut rng, alpha_plus * t)?;
    let n_left = poisson_count(&mut rng, alpha_minus * t)?;

    let mut u = || -> f64 { rng.sample(Open01) };
    let interior = (0..n_int).map(|_| (u(), u())).collect();
    let bottom = (0..n_bot).map(|_| u()).collect();
    let left = (0..n_left).map(|_| u()).collect();
    Ok(PointConfiguration { interior, bottom, left })
}

/// Length of the longest weakly up/right chain.
///
/// Sort by `x` then `y`, then take the longest non-decreasing subsequence
/// of the `y` values (patience sorting with an upper-bound search). Equal
/// `y` values are admitted, which is what lets a run of bottom points or a
/// run of left points form a chain.
pub fn longest_weak_chain(cfg: &PointConfiguration) -> usize {
    let mut pts = cfg.points();
    pts.sort_unstable_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let mut tails: Vec<f64> = Vec::with_capacity(pts.len());
    for &(_, y) in &pts {
        let k = tails.partition_point(|&t| t <= y);
        if k == tails.len() {
            tails.push(y);
        } else {
            tails[k] = y;
        }
    }
    tails.len()
}

/// One longest weak chain, as plane points in increasing order.
pub fn longest_weak_chain_witness(cfg: &PointConfiguration) -> Vec<(f64, f64)> {
    let mut pts = cfg.points();
    pts.sort_unstable_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    // tails[k]: index of the point ending the best chain of length k + 1
    let mut tails: Vec<usize> = Vec::with_capacity(pts.len());
    let mut prev: Vec<Option<usize>> = vec![None; pts.len()];
    for (i, &(_, y)) in pts.iter().enumerate() {
        let k = tails.partition_point(|&j| pts[j].1 <= y);
        prev[i] = k.checked_sub(1).map(|k| tails[k]);
        if k == tails.len() {
            tails.push(i);
        } else {
            tails[k] = i;
        }
    }
    let mut chain = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        chain.push(pts[i]);
        cur = prev[i];
    }
    chain.reverse();
    chain
}
