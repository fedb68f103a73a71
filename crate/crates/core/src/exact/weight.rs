use serde::{Deserialize, Serialize};

use super::mp::{self, Mp};
use crate::{Error, Result};

/// Positive symbol on the unit circle whose Toeplitz determinants drive the
/// exact formulas.
///
/// * `Exponential { t }`: `e^{t(z + 1/z)}`, coefficients `I_j(2t)`.
/// * `Geometric { n, q }`: `(1 + √q z)^n (1 + √q/z)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ToeplitzWeight {
    Exponential { t: f64 },
    Geometric { n: u32, q: f64 },
}

/// Coefficients `ĉ_j` together with the log-scale `s` such that the true
/// Fourier coefficients are `e^s ĉ_j`.
pub(crate) struct Scaled {
    pub c: Vec<Mp>,
    pub log_scale: Mp,
}

impl ToeplitzWeight {
    pub fn exponential(t: f64) -> Result<Self> {
        let w = ToeplitzWeight::Exponential { t };
        w.validate()?;
        Ok(w)
    }

    pub fn geometric(n: u32, q: f64) -> Result<Self> {
        let w = ToeplitzWeight::Geometric { n, q };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ToeplitzWeight::Exponential { t } if !(t > 0.0 && t.is_finite()) => {
                Err(Error::Parameter(format!("t must be positive, got {t}")))
            }
            ToeplitzWeight::Geometric { n: 0, .. } => Err(Error::Parameter("n must be positive".into())),
            ToeplitzWeight::Geometric { q, .. } if !(q > 0.0 && q < 1.0) => {
                Err(Error::Parameter(format!("q must lie in (0, 1), got {q}")))
            }
            _ => Ok(()),
        }
    }

    /// `log₂(max |symbol| / min |symbol|)` over the circle. The Toeplitz
    /// sections can be this badly conditioned, so it sets the working
    /// precision.
    pub fn log2_symbol_range(&self) -> f64 {
        match *self {
            ToeplitzWeight::Exponential { t } => 4.0 * t / std::f64::consts::LN_2,
            ToeplitzWeight::Geometric { n, q } => {
                let r = q.sqrt();
                2.0 * n as f64 * ((1.0 + r) / (1.0 - r)).log2()
            }
        }
    }

    /// `ĉ_0 … ĉ_{j_max}` and `s` in double precision.
    pub fn c_hat(&self, j_max: usize) -> Result<(Vec<f64>, f64)> {
        let bits = mp::working_bits(self.log2_symbol_range(), 0.0);
        let sc = self.scaled(j_max, bits)?;
        Ok((sc.c.iter().map(mp::to_f64).collect(), mp::to_f64(&sc.log_scale)))
    }

    pub(crate) fn scaled(&self, j_max: usize, bits: usize) -> Result<Scaled> {
        self.validate()?;
        match *self {
            ToeplitzWeight::Exponential { t } => {
                Ok(Scaled { c: scaled_bessel(2.0 * t, j_max, bits), log_scale: mp::lift(2.0 * t, bits) })
            }
            ToeplitzWeight::Geometric { n, q } => Ok(geometric_coefficients(n as usize, q, j_max, bits)),
        }
    }
}

/// `e^{-z} I_j(z)` for `j = 0..=j_max` by Miller's backward recurrence,
/// carried out at `bits` of precision and normalised with
/// `Ĩ_0 + 2 Σ Ĩ_k = 1`.
fn scaled_bessel(z: f64, j_max: usize, bits: usize) -> Vec<Mp> {
    // start where the bound (z/2)^m/m! e^{z²/4(m+1) − z} drops below 2^{-bits-64}
    let target = -((bits + 64) as f64) * std::f64::consts::LN_2;
    let mut m = j_max.max(z.ceil() as usize) + 32;
    while (m as f64) * (z / 2.0).ln() - libm::lgamma(m as f64 + 1.0) + z * z / (4.0 * (m as f64 + 1.0)) - z > target {
        m += 8;
    }
    let inv_z = mp::one(bits) / mp::lift(z, bits);
    let mut keep = vec![mp::zero(bits); j_max + 1];
    let mut hi = mp::zero(bits);
    let mut cur = mp::one(bits);
    let mut sum = mp::zero(bits);
    for k in (1..=m).rev() {
        if k <= j_max {
            keep[k] = cur.clone();
        }
        sum += &cur;
        let lo = &hi + &(&cur * &inv_z * mp::lift(2.0 * k as f64, bits));
        hi = cur;
        cur = lo;
    }
    keep[0] = cur.clone();
    let norm = &cur + &(mp::lift(2.0, bits) * sum);
    keep.iter().map(|f| f / &norm).collect()
}

/// `c_j = Σ_k C(n,k) C(n,k+j) q^{(2k+j)/2}`, returned divided by `c_0`
/// with `s = ln c_0`.
fn geometric_coefficients(n: usize, q: f64, j_max: usize, bits: usize) -> Scaled {
    let mut binom = Vec::with_capacity(n + 1);
    binom.push(mp::one(bits));
    for k in 0..n {
        let next = &binom[k] * mp::lift((n - k) as f64, bits) / mp::lift((k + 1) as f64, bits);
        binom.push(next);
    }
    let r = mp::sqrt(&mp::lift(q, bits));
    let mut rpow = Vec::with_capacity(2 * n + 1);
    rpow.push(mp::one(bits));
    for m in 0..2 * n {
        let next = &rpow[m] * &r;
        rpow.push(next);
    }
    let raw = |j: usize| -> Mp {
        if j > n {
            return mp::zero(bits);
        }
        let mut acc = mp::zero(bits);
        for k in 0..=n - j {
            acc += &binom[k] * &binom[k + j] * &rpow[2 * k + j];
        }
        acc
    };
    let c0 = raw(0);
    let c = (0..=j_max).map(|j| raw(j) / &c0).collect();
    Scaled { c, log_scale: c0.ln() }
}
