use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::{sample_stream, Lane};
use crate::{Error, Result};

/// Geometric weights on `{0..=n}²` with a special row and column.
///
/// `weight(i, 0) ~ g(α₊√q)`, `weight(0, j) ~ g(α₋√q)`, bulk `g(q)` and
/// `weight(0, 0) = 0`. When `α₊α₋ < 1` a separate corner variate
/// `~ g(α₊α₋)` is also drawn for the augmented last-passage time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LppInstance {
    pub n: usize,
    pub q: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    weights: Vec<u64>,
    corner: Option<u64>,
}

impl LppInstance {
    /// Builds an instance from explicit weights, row-major over `(i, j)`.
    pub fn from_weights(
        n: usize,
        q: f64,
        alpha_plus: f64,
        alpha_minus: f64,
        weights: Vec<u64>,
        corner: Option<u64>,
    ) -> Result<Self> {
        check_params(n, q, alpha_plus, alpha_minus)?;
        if weights.len() != (n + 1) * (n + 1) {
            return Err(Error::Contract(format!("{} weights for a {}x{} lattice", weights.len(), n + 1, n + 1)));
        }
        if weights[0] != 0 {
            return Err(Error::Contract("weight(0, 0) must be 0".into()));
        }
        Ok(LppInstance { n, q, alpha_plus, alpha_minus, weights, corner })
    }

    pub fn weight(&self, i: usize, j: usize) -> u64 {
        self.weights[i * (self.n + 1) + j]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// The corner variate `~ g(α₊α₋)`, present when `α₊α₋ < 1`.
    pub fn corner_weight(&self) -> Option<u64> {
        self.corner
    }
}

fn check_params(n: usize, q: f64, alpha_plus: f64, alpha_minus: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Parameter(format!("q must lie in (0, 1), got {q}")));
    }
    for (name, a) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Parameter(format!("{name} must be nonnegative, got {a}")));
        }
        if a * q.sqrt() >= 1.0 {
            return Err(Error::Parameter(format!("{name}·√q = {} must be < 1", a * q.sqrt())));
        }
    }
    Ok(())
}

/// `g(p)` by inversion: `floor(ln U / ln p)` with `U` uniform on `(0, 1]`.
fn geometric<R: Rng>(rng: &mut R, p: f64) -> u64 {
    let u = 1.0 - rng.random::<f64>();
    if p == 0.0 {
        return 0;
    }
    (u.ln() / p.ln()).floor() as u64
}

/// Draws an instance. Sites are visited shell by shell (`max(i, j) = k`
/// for `k = 1, 2, …`), each consuming one uniform, so instances of different
/// sizes with the same `(seed, index)` agree on their common sites.
pub fn sample_lpp(n: usize, q: f64, alpha_plus: f64, alpha_minus: f64, seed: u64, index: u64) -> Result<LppInstance> {
    check_params(n, q, alpha_plus, alpha_minus)?;
    let sq = q.sqrt();
    let (p_row, p_col) = (alpha_plus * sq, alpha_minus * sq);
    let param = |i: usize, j: usize| match (i, j) {
        (_, 0) => p_row,
        (0, _) => p_col,
        _ => q,
    };
    let m = n + 1;
    let mut weights = vec![0u64; m * m];
    let mut rng = sample_stream(seed, index, Lane::LatticeWeights);
    for k in 1..=n {
        for i in 0..=k {
            weights[i * m + k] = geometric(&mut rng, param(i, k));
        }
        for j in 0..k {
            weights[k * m + j] = geometric(&mut rng, param(k, j));
        }
    }
    let prod = alpha_plus * alpha_minus;
    let corner = (prod < 1.0).then(|| {
        let mut r = sample_stream(seed, index, Lane::CornerWeight);
        geometric(&mut r, prod)
    });
    Ok(LppInstance { n, q, alpha_plus, alpha_minus, weights, corner })
}

/// Maximal weight over up/right lattice paths from `(0, 0)` to `(n, n)`.
///
/// With `include_corner_weight` the corner variate is added at `(0, 0)`,
/// which every path visits.
pub fn lpp_last_passage(inst: &LppInstance, include_corner_weight: bool) -> Result<u64> {
    let corner = if include_corner_weight {
        inst.corner.ok_or_else(|| {
            Error::Parameter(format!("corner weight needs α₊α₋ < 1, got {}", inst.alpha_plus * inst.alpha_minus))
        })?
    } else {
        0
    };
    let m = inst.n + 1;
    let mut row = vec![0u64; m];
    for i in 0..m {
        for j in 0..m {
            let up = if i > 0 { row[j] } else { 0 };
            let left = if j > 0 { row[j - 1] } else { 0 };
            row[j] = inst.weights[i * m + j] + up.max(left);
        }
    }
    Ok(row[m - 1] + corner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_path_example() {
        // w(0,1) = 2, w(1,0) = 1, w(1,1) = 3
        let inst = LppInstance::from_weights(1, 0.5, 0.0, 0.0, vec![0, 2, 1, 3], None).unwrap();
        assert_eq!(lpp_last_passage(&inst, false).unwrap(), 5);
        let zero = LppInstance::from_weights(3, 0.5, 0.0, 0.0, vec![0; 16], None).unwrap();
        assert_eq!(lpp_last_passage(&zero, false).unwrap(), 0);
    }

    #[test]
    fn corner_is_zero_and_row_column_follow_sources() {
        for index in 0..50 {
            let inst = sample_lpp(2, 0.6, 1.2, 0.0, 3, index).unwrap();
            assert_eq!(inst.weight(0, 0), 0);
            // α₋ = 0 kills column 0
            assert!((1..=2).all(|i| inst.weight(0, i) == 0));
        }
    }

    #[test]
    fn vanishing_q_gives_zero_bulk() {
        let inst = sample_lpp(20, 1e-12, 0.0, 0.0, 17, 0).unwrap();
        assert!(inst.weights().iter().all(|&w| w == 0));
    }

    #[test]
    fn geometric_mean_oracle() {
        let mut rng = sample_stream(99, 0, Lane::LatticeWeights);
        let draws = 100_000;
        let sum: u64 = (0..draws).map(|_| geometric(&mut rng, 0.5)).sum();
        let mean = sum as f64 / draws as f64;
        // g(1/2) has mean 1 and variance 2
        assert!((mean - 1.0).abs() < 3.0 * (2.0f64 / draws as f64).sqrt(), "{mean}");
    }

    #[test]
    fn geometric_point_probabilities() {
        let mut rng = sample_stream(1, 1, Lane::LatticeWeights);
        let draws = 200_000;
        let q = 0.3;
        let mut hist = [0usize; 4];
        for _ in 0..draws {
            let k = geometric(&mut rng, q) as usize;
            if k < 4 {
                hist[k] += 1;
            }
        }
        for (k, &c) in hist.iter().enumerate() {
            let p = (1.0 - q) * q.powi(k as i32);
            let f = c as f64 / draws as f64;
            assert!((f - p).abs() < 4.0 * (p * (1.0 - p) / draws as f64).sqrt(), "k={k}");
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(sample_lpp(3, 0.25, 2.0, 0.0, 0, 0).is_err());
        assert!(sample_lpp(3, 0.25, 0.0, 2.5, 0, 0).is_err());
        assert!(sample_lpp(3, 1.0, 0.0, 0.0, 0, 0).is_err());
        assert!(sample_lpp(0, 0.5, 0.0, 0.0, 0, 0).is_err());
        let inst = sample_lpp(3, 0.25, 1.5, 1.0, 0, 0).unwrap();
        assert!(inst.corner_weight().is_none());
        assert!(lpp_last_passage(&inst, true).is_err());
        assert!(lpp_last_passage(&inst, false).is_ok());
    }

    #[test]
    fn corner_augmentation_adds_geometric_variable() {
        let (a, reps) = (0.5, 100_000u64);
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for i in 0..reps {
            let inst = sample_lpp(5, 0.25, a, a, 77, i).unwrap();
            let d = (lpp_last_passage(&inst, true).unwrap() - lpp_last_passage(&inst, false).unwrap()) as f64;
            sum += d;
            sum2 += d * d;
        }
        let mean = sum / reps as f64;
        let var = sum2 / reps as f64 - mean * mean;
        let p = a * a;
        let expect = p / (1.0 - p);
        assert!((mean - expect).abs() < 3.0 * (var / reps as f64).sqrt(), "{mean} vs {expect}");
    }

    #[test]
    fn nested_instances_are_superadditive() {
        for index in 0..200 {
            let small = sample_lpp(6, 0.4, 0.8, 0.3, 5, index).unwrap();
            let big = sample_lpp(12, 0.4, 0.8, 0.3, 5, index).unwrap();
            for i in 0..=6 {
                for j in 0..=6 {
                    assert_eq!(small.weight(i, j), big.weight(i, j));
                }
            }
            assert!(lpp_last_passage(&big, false).unwrap() >= lpp_last_passage(&small, false).unwrap());
        }
    }

    /// Path enumeration for tiny lattices.
    fn brute(inst: &LppInstance) -> u64 {
        fn go(inst: &LppInstance, i: usize, j: usize) -> u64 {
            let w = inst.weight(i, j);
            let n = inst.n;
            match (i == n, j == n) {
                (true, true) => w,
                (true, false) => w + go(inst, i, j + 1),
                (false, true) => w + go(inst, i + 1, j),
                _ => w + go(inst, i + 1, j).max(go(inst, i, j + 1)),
            }
        }
        go(inst, 0, 0)
    }

    fn lattice() -> impl Strategy<Value = (usize, Vec<u64>)> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec(0u64..6, (n + 1) * (n + 1)).prop_map(move |mut w| {
                w[0] = 0;
                (n, w)
            })
        })
    }

    proptest! {
        #[test]
        fn dp_matches_path_enumeration((n, w) in lattice()) {
            let inst = LppInstance::from_weights(n, 0.5, 0.0, 0.0, w, None).unwrap();
            prop_assert_eq!(lpp_last_passage(&inst, false).unwrap(), brute(&inst));
        }

        #[test]
        fn unit_increment_moves_by_at_most_one((n, w) in lattice(), site in any::<prop::sample::Index>()) {
            let base = LppInstance::from_weights(n, 0.5, 0.0, 0.0, w.clone(), None).unwrap();
            let mut w2 = w;
            let k = 1 + site.index(w2.len() - 1);
            w2[k] += 1;
            let bumped = LppInstance::from_weights(n, 0.5, 0.0, 0.0, w2, None).unwrap();
            let (x0, x1) = (lpp_last_passage(&base, false).unwrap(), lpp_last_passage(&bumped, false).unwrap());
            prop_assert!(x1 == x0 || x1 == x0 + 1);
        }
    }
}
