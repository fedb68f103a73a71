//! Limiting distribution functions assembled from the Painlevé table and the
//! transition functions, with moments and densities.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::painleve::{PainleveTable, PainleveValues};
use crate::specfun::{integrate_sampled_total, normal_cdf, RealGrid};
use crate::transition::{log_product, xroute_any};
use crate::{Error, Result};

/// Largest |w| accepted for G and H.
pub const W_TABLE_ENVELOPE: f64 = 4.0;
/// Below this |w₊ + w₋| the H formula is replaced by its limit at w₊ = −w₋.
pub const LHOPITAL_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Gue,
    Goe,
    GoeSquared,
    Gse,
    F0,
    G,
    H,
    Normal,
    NormalSquared,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 9] = [
        Self::Gue,
        Self::Goe,
        Self::GoeSquared,
        Self::Gse,
        Self::F0,
        Self::G,
        Self::H,
        Self::Normal,
        Self::NormalSquared,
    ];

    /// Number of w parameters.
    pub fn arity(self) -> usize {
        match self {
            Self::G => 1,
            Self::H => 2,
            _ => 0,
        }
    }

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Self::Gue => "fgue",
            Self::Goe => "fgoe",
            Self::GoeSquared => "fgoe2",
            Self::Gse => "fgse",
            Self::F0 => "f0",
            Self::G => "g",
            Self::H => "h",
            Self::Normal => "normal",
            Self::NormalSquared => "normal2",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown distribution '{s}'")))
    }
}

/// A distribution function sampled on a uniform grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionTable {
    pub kind: DistributionKind,
    pub params: Vec<f64>,
    pub grid: RealGrid,
    pub cdf: Vec<f64>,
}

/// Right end needed so that a law shifted by a negative w still has its
/// whole right tail on the grid.
fn right_reach(pt: &PainleveTable, params: &[f64]) -> f64 {
    let neg = params.iter().fold(0.0_f64, |m, &w| m.max(-w));
    pt.x_hi().max(4.0 * neg * neg + 12.0 * neg.sqrt() + 4.0)
}

/// Builds the table of `kind` with its w parameters.
pub fn cdf_table(pt: &PainleveTable, kind: DistributionKind, params: &[f64]) -> Result<DistributionTable> {
    if params.len() != kind.arity() {
        return Err(Error::Contract(format!("{kind} takes {} parameter(s), got {}", kind.arity(), params.len())));
    }
    if let Some(w) = params.iter().find(|w| !(w.abs() <= W_TABLE_ENVELOPE)) {
        return Err(Error::Envelope(format!("|w| must be <= {W_TABLE_ENVELOPE}, got {w}")));
    }
    let grid = pt.grid.extended_to(right_reach(pt, params));
    let xs = grid.abscissae();
    let pv = pt.values_on(&grid)?;
    let fgue = |p: &PainleveValues| p.f * p.f;

    let cdf: Vec<f64> = match kind {
        DistributionKind::Gue => pv.iter().map(fgue).collect(),
        DistributionKind::Goe => pv.iter().map(|p| p.f * p.e).collect(),
        DistributionKind::GoeSquared => pv.iter().map(|p| (p.f * p.e).powi(2)).collect(),
        DistributionKind::Gse => pv.iter().map(|p| p.f * (p.e + 1.0 / p.e) / 2.0).collect(),
        DistributionKind::F0 => {
            pv.iter().zip(&xs).map(|(p, &x)| (1.0 - p.aux_y(x) * p.v) * p.e.powi(4) * fgue(p)).collect()
        }
        DistributionKind::Normal => xs.iter().map(|&x| normal_cdf(x)).collect(),
        DistributionKind::NormalSquared => xs.iter().map(|&x| normal_cdf(x).powi(2)).collect(),
        DistributionKind::G => {
            let ab = xroute_any(pt, params[0], &xs)?;
            ab.iter().zip(&pv).map(|(q, p)| q.a() * fgue(p)).collect()
        }
        DistributionKind::H => {
            // canonical order makes the result exactly symmetric in (w₊, w₋)
            let (w1, w2) = if params[0] <= params[1] { (params[0], params[1]) } else { (params[1], params[0]) };
            if (w1 + w2).abs() < LHOPITAL_THRESHOLD {
                antisymmetric_h(pt, 0.5 * (w2 - w1), &xs, &pv)?
            } else {
                let ab1 = xroute_any(pt, w1, &xs)?;
                let ab2 = if w2 == w1 { ab1.clone() } else { xroute_any(pt, w2, &xs)? };
                let denom = 2.0 * (w1 + w2);
                ab1.iter()
                    .zip(&ab2)
                    .zip(&pv)
                    .map(|((p, q), v)| {
                        let aa = log_product(p.a_m, p.la, q.a_m, q.la);
                        let bb = log_product(p.b_m, p.lb, q.b_m, q.lb);
                        (aa - (aa - bb) / denom * v.v) * fgue(v)
                    })
                    .collect()
            }
        }
    };
    Ok(DistributionTable {
        kind,
        params: params.to_vec(),
        grid,
        cdf: cdf.into_iter().map(|c| c.clamp(0.0, 1.0)).collect(),
    })
}

/// H(x; w, −w) = {a(w)a(−w) − y_w v} F_GUE with
/// y_w = (2u² + x − 4w²)a(w)a(−w) − (u' + 2wu)b(w)a(−w) − (u' − 2wu)a(w)b(−w).
fn antisymmetric_h(pt: &PainleveTable, w: f64, xs: &[f64], pv: &[PainleveValues]) -> Result<Vec<f64>> {
    let plus = xroute_any(pt, w, xs)?;
    Ok(plus
        .iter()
        .zip(xs)
        .zip(pv)
        .map(|((p, &x), v)| {
            let m = p.reflect(x, w);
            let aa = log_product(p.a_m, p.la, m.a_m, m.la);
            let ba = log_product(p.b_m, p.lb, m.a_m, m.la);
            let ab = log_product(p.a_m, p.la, m.b_m, m.lb);
            let (u, up) = (v.u, v.u_prime);
            let y = (2.0 * u * u + x - 4.0 * w * w) * aa - (up + 2.0 * w * u) * ba - (up - 2.0 * w * u) * ab;
            (aa - y * v.v) * v.f * v.f
        })
        .collect())
}

impl DistributionTable {
    /// Linear interpolation inside the grid; 0 to the left and 1 to the right.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x < self.grid.x_lo() {
            return 0.0;
        }
        match self.grid.locate(x) {
            None => 1.0,
            Some((i, off)) => {
                let s = off / self.grid.step();
                (1.0 - s) * self.cdf[i] + s * self.cdf[i + 1]
            }
        }
    }

    /// Mean and variance from the tail-integral forms
    /// E[X] = x_hi − x_lo F(x_lo) − ∫F + ∫_{x_hi}^∞ (1 − F),
    /// E[X²] = x_hi² − x_lo² F(x_lo) − 2∫xF + 2∫_{x_hi}^∞ x(1 − F).
    pub fn mean_variance(&self) -> Result<(f64, f64)> {
        let g = &self.grid;
        let (lo, hi) = (g.x_lo(), g.x_hi());
        let f_lo = self.cdf[0];
        let deficit = 1.0 - self.cdf[self.cdf.len() - 1];
        let total = integrate_sampled_total(g, &self.cdf)?;
        let xf: Vec<f64> = self.cdf.iter().enumerate().map(|(i, c)| g.x(i) * c).collect();
        let total_x = integrate_sampled_total(g, &xf)?;
        // super-exponential right tails: ∫_{x_hi}^∞ (1 − F) ≈ (1 − F(x_hi)) / (2√x_hi)
        let tail = deficit / (2.0 * hi.max(1.0).sqrt());
        let mean = hi - lo * f_lo - total + tail;
        let second = hi * hi - lo * lo * f_lo - 2.0 * total_x + 2.0 * hi * tail;
        Ok((mean, second - mean * mean))
    }

    /// Density by fourth-order differences of the CDF.
    pub fn density(&self) -> Result<Vec<f64>> {
        let n = self.cdf.len();
        if n < 5 {
            return Err(Error::Contract("density needs at least five grid points".into()));
        }
        let h = self.grid.step();
        let c = &self.cdf;
        let mut d = vec![0.0; n];
        for i in 0..n {
            d[i] = if i < 2 {
                (-25.0 * c[i] + 48.0 * c[i + 1] - 36.0 * c[i + 2] + 16.0 * c[i + 3] - 3.0 * c[i + 4]) / (12.0 * h)
            } else if i + 2 >= n {
                (25.0 * c[i] - 48.0 * c[i - 1] + 36.0 * c[i - 2] - 16.0 * c[i - 3] + 3.0 * c[i - 4]) / (12.0 * h)
            } else {
                (-c[i + 2] + 8.0 * c[i + 1] - 8.0 * c[i - 1] + c[i - 2]) / (12.0 * h)
            };
        }
        for (i, v) in d.iter_mut().enumerate() {
            if *v < -1e-9 {
                return Err(Error::Monotonicity { index: i, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(d)
    }

    /// CSV `x,cdf` or `x,cdf,pdf`.
    pub fn write_csv<W: Write>(&self, mut out: W, with_pdf: bool) -> Result<()> {
        let pdf = if with_pdf { Some(self.density()?) } else { None };
        writeln!(out, "{}", if with_pdf { "x,cdf,pdf" } else { "x,cdf" })?;
        for i in 0..self.grid.count() {
            match &pdf {
                Some(p) => writeln!(out, "{},{:e},{:e}", self.grid.x(i), self.cdf[i], p[i])?,
                None => writeln!(out, "{},{:e}", self.grid.x(i), self.cdf[i])?,
            }
        }
        Ok(())
    }

    /// `{kind, params, mean, variance, grid}`.
    pub fn summary_json(&self) -> Result<serde_json::Value> {
        let (mean, variance) = self.mean_variance()?;
        Ok(serde_json::json!({
            "kind": self.kind.name(),
            "params": self.params,
            "mean": mean,
            "variance": variance,
            "grid": { "x_lo": self.grid.x_lo(), "x_hi": self.grid.x_hi(), "step": self.grid.step(), "count": self.grid.count() },
        }))
    }
}
