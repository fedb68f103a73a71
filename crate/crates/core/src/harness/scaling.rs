use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionKind;
use crate::{Error, Result};

/// Which random model a run samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Png,
    Lpp,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Png => "png",
            Model::Lpp => "lpp",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "png" => Ok(Model::Png),
            "lpp" => Ok(Model::Lpp),
            _ => Err(Error::Parameter(format!("unknown model '{s}' (expected png or lpp)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    PngTw,
    PngGauss,
    LppTw,
    LppGauss,
    CriticalPng,
    CriticalLpp,
}

impl Regime {
    pub const ALL: [Regime; 6] =
        [Regime::PngTw, Regime::PngGauss, Regime::LppTw, Regime::LppGauss, Regime::CriticalPng, Regime::CriticalLpp];

    pub fn name(self) -> &'static str {
        match self {
            Regime::PngTw => "PNG_TW",
            Regime::PngGauss => "PNG_GAUSS",
            Regime::LppTw => "LPP_TW",
            Regime::LppGauss => "LPP_GAUSS",
            Regime::CriticalPng => "CRITICAL_PNG",
            Regime::CriticalLpp => "CRITICAL_LPP",
        }
    }

    pub fn model(self) -> Model {
        match self {
            Regime::PngTw | Regime::PngGauss | Regime::CriticalPng => Model::Png,
            _ => Model::Lpp,
        }
    }

    pub fn is_gaussian(self) -> bool {
        matches!(self, Regime::PngGauss | Regime::LppGauss)
    }

    fn is_critical(self) -> bool {
        matches!(self, Regime::CriticalPng | Regime::CriticalLpp)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Regime::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| Error::Parameter(format!("unknown regime '{s}'")))
    }
}

/// Centring and scaling constants of the lattice model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LppScaling {
    pub mu: f64,
    pub sigma: f64,
    /// Present only for `1 < α < 1/√q`.
    pub eta: Option<f64>,
    pub rho: Option<f64>,
}

pub fn lpp_scaling_params(q: f64, alpha: f64) -> Result<LppScaling> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Parameter(format!("q must lie in (0, 1), got {q}")));
    }
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    let r = q.sqrt();
    if alpha * r >= 1.0 {
        return Err(Error::Parameter(format!("alpha = {alpha} must be below 1/√q = {}", 1.0 / r)));
    }
    let mu = 2.0 * r / (1.0 - r);
    let sigma = q.powf(1.0 / 6.0) * (1.0 + r).cbrt() / (1.0 - r);
    let (eta, rho) = if alpha > 1.0 {
        let den = (1.0 - r * alpha) * (1.0 - r / alpha);
        let eta = r * (alpha + 1.0 / alpha - 2.0 * r) / den;
        let rho = r * (alpha - 1.0 / alpha).sqrt() * (1.0 / r - r).sqrt() / den;
        (Some(eta), Some(rho))
    } else {
        (None, None)
    };
    Ok(LppScaling { mu, sigma, eta, rho })
}

/// A regime together with its named parameters.
///
/// Keys: `t` (PNG), `n` and `q` (lattice), `alpha_plus`, `alpha_minus`, and
/// for the critical regimes `w_plus`, `w_minus`. A missing `alpha_*`
/// defaults to 0; in a critical regime a given `w_*` takes precedence over
/// `alpha_*` on the same side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub regime: Regime,
    pub params: BTreeMap<String, f64>,
}

/// Sampler parameters after the regime's substitutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolved {
    Png { t: f64, alpha_plus: f64, alpha_minus: f64 },
    Lpp { n: usize, q: f64, alpha_plus: f64, alpha_minus: f64 },
}

impl Resolved {
    pub fn alphas(&self) -> (f64, f64) {
        match *self {
            Resolved::Png { alpha_plus, alpha_minus, .. } | Resolved::Lpp { alpha_plus, alpha_minus, .. } => {
                (alpha_plus, alpha_minus)
            }
        }
    }
}

/// `x = (raw − center) / scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub center: f64,
    pub scale: f64,
}

impl AffineMap {
    pub fn apply(&self, raw: f64) -> f64 {
        (raw - self.center) / self.scale
    }

    pub fn invert(&self, x: f64) -> f64 {
        self.center + self.scale * x
    }
}

const KNOWN_KEYS: [&str; 7] = ["t", "n", "q", "alpha_plus", "alpha_minus", "w_plus", "w_minus"];

impl ScalingSpec {
    pub fn new(regime: Regime) -> Self {
        ScalingSpec { regime, params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn get(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    fn require(&self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| Error::Parameter(format!("{} needs parameter '{key}'", self.regime)))
    }

    fn side(&self, w_key: &str, a_key: &str, scale: f64) -> Result<f64> {
        let alpha = match (self.regime.is_critical(), self.get(w_key)) {
            (true, Some(w)) => 1.0 - 2.0 * w / scale,
            _ => self.get(a_key).unwrap_or(0.0),
        };
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("{a_key} = {alpha} must be nonnegative")));
        }
        Ok(alpha)
    }

    /// Checks the parameters and applies the critical substitution.
    pub fn resolve(&self) -> Result<Resolved> {
        if let Some(k) = self.params.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Parameter(format!("unknown parameter '{k}'")));
        }
        if let Some((k, v)) = self.params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Parameter(format!("{k} = {v} is not finite")));
        }
        if !self.regime.is_critical() {
            if let Some(k) = ["w_plus", "w_minus"].into_iter().find(|k| self.params.contains_key(*k)) {
                return Err(Error::Parameter(format!("'{k}' only applies to critical regimes")));
            }
        }
        let resolved = match self.regime.model() {
            Model::Png => {
                let t = self.require("t")?;
                if t <= 0.0 {
                    return Err(Error::Parameter(format!("t must be positive, got {t}")));
                }
                let s = t.cbrt();
                Resolved::Png {
                    t,
                    alpha_plus: self.side("w_plus", "alpha_plus", s)?,
                    alpha_minus: self.side("w_minus", "alpha_minus", s)?,
                }
            }
            Model::Lpp => {
                let n = self.require("n")?;
                if !(n >= 1.0 && n.fract() == 0.0 && n <= 1e6) {
                    return Err(Error::Parameter(format!("n must be a positive integer, got {n}")));
                }
                let q = self.require("q")?;
                let sigma = lpp_scaling_params(q, 0.0)?.sigma;
                let s = sigma * n.cbrt();
                let (ap, am) = (self.side("w_plus", "alpha_plus", s)?, self.side("w_minus", "alpha_minus", s)?);
                for (name, a) in [("alpha_plus", ap), ("alpha_minus", am)] {
                    if a * q.sqrt() >= 1.0 {
                        return Err(Error::Parameter(format!("{name} = {a} must be below 1/√q")));
                    }
                }
                Resolved::Lpp { n: n as usize, q, alpha_plus: ap, alpha_minus: am }
            }
        };
        if self.regime.is_gaussian() {
            let (ap, am) = resolved.alphas();
            if ap.max(am) <= 1.0 {
                return Err(Error::Parameter(format!("{} needs max(alpha_plus, alpha_minus) > 1", self.regime)));
            }
        }
        Ok(resolved)
    }

    /// The affine map from the raw observable to the scaled variable.
    pub fn affine_map(&self) -> Result<AffineMap> {
        let resolved = self.resolve()?;
        let (ap, am) = resolved.alphas();
        let alpha = ap.max(am);
        Ok(match (self.regime, resolved) {
            (Regime::PngTw | Regime::CriticalPng, Resolved::Png { t, .. }) => {
                AffineMap { center: 2.0 * t, scale: t.cbrt() }
            }
            (Regime::PngGauss, Resolved::Png { t, .. }) => {
                AffineMap { center: (alpha + 1.0 / alpha) * t, scale: (alpha - 1.0 / alpha).sqrt() * t.sqrt() }
            }
            (Regime::LppTw | Regime::CriticalLpp, Resolved::Lpp { n, q, .. }) => {
                let p = lpp_scaling_params(q, 0.0)?;
                let n = n as f64;
                AffineMap { center: p.mu * n, scale: p.sigma * n.cbrt() }
            }
            (Regime::LppGauss, Resolved::Lpp { n, q, .. }) => {
                let p = lpp_scaling_params(q, alpha)?;
                let n = n as f64;
                let (eta, rho) = (p.eta.unwrap_or(f64::NAN), p.rho.unwrap_or(f64::NAN));
                AffineMap { center: eta * n, scale: rho * n.sqrt() }
            }
            _ => unreachable!("resolve pairs each regime with its model"),
        })
    }

    /// The limiting law of the scaled variable, when one is known for these
    /// parameters.
    pub fn limit_law(&self) -> Result<Option<(DistributionKind, Vec<f64>)>> {
        let resolved = self.resolve()?;
        let (ap, am) = resolved.alphas();
        Ok(match self.regime {
            Regime::PngGauss | Regime::LppGauss => {
                if ap == am {
                    Some((DistributionKind::NormalSquared, vec![]))
                } else {
                    Some((DistributionKind::Normal, vec![]))
                }
            }
            Regime::CriticalPng | Regime::CriticalLpp => match (self.get("w_plus"), self.get("w_minus")) {
                (Some(wp), Some(wm)) => Some((DistributionKind::H, vec![wp, wm])),
                (Some(w), None) if am < 1.0 => Some((DistributionKind::G, vec![w])),
                (None, Some(w)) if ap < 1.0 => Some((DistributionKind::G, vec![w])),
                (None, None) => edge_law(ap, am),
                _ => None,
            },
            Regime::PngTw | Regime::LppTw => edge_law(ap, am),
        })
    }
}

fn edge_law(ap: f64, am: f64) -> Option<(DistributionKind, Vec<f64>)> {
    let (lo, hi) = if ap <= am { (ap, am) } else { (am, ap) };
    if hi < 1.0 {
        Some((DistributionKind::Gue, vec![]))
    } else if hi == 1.0 && lo < 1.0 {
        Some((DistributionKind::GoeSquared, vec![]))
    } else if lo == 1.0 {
        Some((DistributionKind::F0, vec![]))
    } else {
        None
    }
}
