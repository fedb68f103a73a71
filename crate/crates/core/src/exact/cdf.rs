use std::io::Write;

use serde::Serialize;

use super::mp::{self, Mp};
use super::opuc::{ratio_from, ratio_points, PointValues};
use super::toeplitz::Szego;
use super::weight::ToeplitzWeight;
use crate::{Error, Result};

/// Largest `t` accepted by [`png_cdf_exact`].
pub const PNG_T_ENVELOPE: f64 = 12.0;
/// Corner of the lattice envelope: [`lpp_cdf_exact`] accepts any `(n, q)`
/// whose symbol is no worse conditioned than at `(LPP_N_ENVELOPE, LPP_Q_ENVELOPE)`.
pub const LPP_N_ENVELOPE: u32 = 40;
pub const LPP_Q_ENVELOPE: f64 = 0.5;

/// Relative change under a precision increase above which a row is flagged.
const FLAG_TOLERANCE: f64 = 1e-8;
/// Extra bits used for the confirmation pass.
const CONFIRM_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfRow {
    pub l: usize,
    pub cdf: f64,
    /// Set when raising the working precision moved this value by more than
    /// `1e-8` relative.
    pub precision_flag: bool,
}

/// `P(· ≤ l)` for `l = 0..=l_max` from the Toeplitz formula.
#[derive(Debug, Clone, Serialize)]
pub struct ExactCdf {
    pub model: &'static str,
    pub weight: ToeplitzWeight,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub working_bits: usize,
    pub rows: Vec<CdfRow>,
}

impl ExactCdf {
    pub fn cdf(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.cdf).collect()
    }

    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.precision_flag).count()
    }

    /// `Σ_{l < l_max} (1 − P_l)`, the mean when the mass beyond `l_max` is
    /// negligible.
    pub fn truncated_mean(&self) -> f64 {
        let n = self.rows.len();
        self.rows[..n.saturating_sub(1)].iter().map(|r| 1.0 - r.cdf).sum()
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "l,cdf,precision_flag")?;
        for r in &self.rows {
            writeln!(out, "{},{:.17e},{}", r.l, r.cdf, r.precision_flag as u8)?;
        }
        Ok(())
    }

    pub fn manifest_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model,
            "weight": self.weight,
            "alpha_plus": self.alpha_plus,
            "alpha_minus": self.alpha_minus,
            "l_max": self.rows.len().saturating_sub(1),
            "working_bits": self.working_bits,
            "symbol_log2_range": self.weight.log2_symbol_range(),
            "flagged_rows": self.flagged(),
            "final_cdf": self.rows.last().map(|r| r.cdf),
        })
    }
}

fn check_alpha(name: &str, a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be nonnegative, got {a}")))
    }
}

/// `P(L(t) ≤ l)` for the Poisson point model with edge sources.
pub fn png_cdf_exact(t: f64, alpha_plus: f64, alpha_minus: f64, l_max: usize) -> Result<ExactCdf> {
    check_alpha("alpha_plus", alpha_plus)?;
    check_alpha("alpha_minus", alpha_minus)?;
    let weight = ToeplitzWeight::exponential(t)?;
    if t > PNG_T_ENVELOPE {
        return Err(Error::Envelope(format!("t = {t} exceeds {PNG_T_ENVELOPE}")));
    }
    let prefactor = move |bits: usize| {
        let t = mp::lift(t, bits);
        -(&t * &t) - &t * (mp::lift(alpha_plus, bits) + mp::lift(alpha_minus, bits))
    };
    finish("png", weight, alpha_plus, alpha_minus, l_max, &prefactor)
}

/// `P(X(N) ≤ l)` for the geometric lattice polymer with a special row and
/// column.
pub fn lpp_cdf_exact(n: u32, q: f64, alpha_plus: f64, alpha_minus: f64, l_max: usize) -> Result<ExactCdf> {
    check_alpha("alpha_plus", alpha_plus)?;
    check_alpha("alpha_minus", alpha_minus)?;
    let weight = ToeplitzWeight::geometric(n, q)?;
    for (name, a) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
        if a * q.sqrt() >= 1.0 {
            return Err(Error::Parameter(format!("{name}·√q = {} must be < 1", a * q.sqrt())));
        }
    }
    let corner = ToeplitzWeight::Geometric { n: LPP_N_ENVELOPE, q: LPP_Q_ENVELOPE };
    if weight.log2_symbol_range() > corner.log2_symbol_range() {
        return Err(Error::Envelope(format!(
            "(n, q) = ({n}, {q}) is worse conditioned than (n, q) = ({LPP_N_ENVELOPE}, {LPP_Q_ENVELOPE})"
        )));
    }
    let prefactor = move |bits: usize| {
        let one = mp::one(bits);
        let r = mp::sqrt(&mp::lift(q, bits));
        let nn = mp::lift(n as f64, bits);
        let edge = |a: f64| (&one - mp::lift(a, bits) * &r).ln();
        &nn * (edge(alpha_plus) + edge(alpha_minus)) + &nn * &nn * (&one - mp::lift(q, bits)).ln()
    };
    finish("lpp", weight, alpha_plus, alpha_minus, l_max, &prefactor)
}

fn finish(
    model: &'static str,
    weight: ToeplitzWeight,
    alpha_plus: f64,
    alpha_minus: f64,
    l_max: usize,
    prefactor: &dyn Fn(usize) -> Mp,
) -> Result<ExactCdf> {
    let grow = alpha_plus.max(alpha_minus).max(1.0).log2();
    let bits = mp::working_bits(weight.log2_symbol_range(), 2.0 * l_max as f64 * grow + 64.0);
    let main = probabilities(&weight, alpha_plus, alpha_minus, l_max, bits, prefactor)?;
    let check = probabilities(&weight, alpha_plus, alpha_minus, l_max, bits + CONFIRM_BITS, prefactor)?;
    let mut rows = Vec::with_capacity(l_max + 1);
    for (l, (p, p2)) in main.iter().zip(&check).enumerate() {
        if *p < -1e-12 || *p > 1.0 + 1e-12 {
            return Err(Error::PrecisionExhausted { l, detail: format!("probability {p:e} is outside [0, 1]") });
        }
        let flag = (p - p2).abs() > FLAG_TOLERANCE * p2.abs() || !p.is_finite();
        rows.push(CdfRow { l, cdf: *p, precision_flag: flag });
    }
    Ok(ExactCdf { model, weight, alpha_plus, alpha_minus, working_bits: bits, rows })
}

/// `P_l = e^{pre}(D'_l − α₊α₋ D'_{l−1})` with `D'_{−1} = 0`, evaluated as
/// `e^{pre + l s} D̂_l (r_l − α₊α₋ r_{l−1} e^{−s} / N̂_{l−1})` where `r_l`
/// is the `D'/D` ratio and `N̂_k = D̂_{k+1} / D̂_k`.
fn probabilities(
    weight: &ToeplitzWeight,
    alpha_plus: f64,
    alpha_minus: f64,
    l_max: usize,
    bits: usize,
    prefactor: &dyn Fn(usize) -> Mp,
) -> Result<Vec<f64>> {
    let sc = weight.scaled(l_max + 1, bits)?;
    let pre = prefactor(bits);
    let inv_scale = (-sc.log_scale.clone()).exp();
    let prod = mp::lift(alpha_plus * alpha_minus, bits);
    let (z1, z2, limit) = ratio_points(alpha_plus, alpha_minus);
    let (z1, z2) = (mp::lift(z1, bits), mp::lift(z2, bits));
    let mut at1 = PointValues::degree_zero(bits);
    let mut at2 = PointValues::degree_zero(bits);
    let mut sz = Szego::new(&sc.c);

    let mut out = Vec::with_capacity(l_max + 1);
    let mut det = mp::one(bits);
    let mut prev_ratio: Option<(Mp, Mp)> = None;
    for l in 0..=l_max {
        let r = ratio_from(l, alpha_plus, alpha_minus, &at1, &at2, limit);
        let bracket = match &prev_ratio {
            None => r.clone(),
            Some((r_prev, n_prev)) => &r - &prod * r_prev * &inv_scale / n_prev,
        };
        let log_front = &pre + &(mp::lift(l as f64, bits) * &sc.log_scale);
        out.push(mp::to_f64(&(log_front.exp() * &det * bracket)));
        if l == l_max {
            break;
        }
        let norm = sz.norm().clone();
        let gamma = sz.step()?;
        at1.advance(&z1, &gamma);
        at2.advance(&z2, &gamma);
        det = &det * &norm;
        prev_ratio = Some((r, norm));
    }
    Ok(out)
}
