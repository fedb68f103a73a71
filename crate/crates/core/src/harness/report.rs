use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use super::mc::{ks_distance, run_mc, EcdfSummary};
use super::scaling::{Model, Regime, Resolved, ScalingSpec};
use crate::distributions::{DistributionKind, DistributionTable};
use crate::exact::{lpp_cdf_exact, png_cdf_exact};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct TargetSummary {
    pub kind: DistributionKind,
    pub params: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

/// Monte Carlo against the finite-size formula, on the raw scale.
#[derive(Debug, Clone, Serialize)]
pub struct ExactComparison {
    pub l_max: usize,
    pub cdf: Vec<f64>,
    /// `max_l |ECDF(l) − P(raw ≤ l)|`.
    pub ks: f64,
    pub flagged: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub model: Model,
    pub regime: Regime,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub ks: f64,
    pub exact_available: bool,
    pub runtime_ms: u64,
    pub raw_mean: f64,
    pub raw_variance: f64,
    pub center: f64,
    pub scale: f64,
    pub target: TargetSummary,
    pub mean_delta: f64,
    pub variance_delta: f64,
    pub exact: Option<ExactComparison>,
    #[serde(skip)]
    pub summary: EcdfSummary,
}

fn check_pairing(regime: Regime, kind: DistributionKind) -> Result<()> {
    let gaussian_target = matches!(kind, DistributionKind::Normal | DistributionKind::NormalSquared);
    if regime.is_gaussian() != gaussian_target {
        return Err(Error::Parameter(format!("target {kind} does not fit regime {regime}")));
    }
    Ok(())
}

fn exact_comparison(summary: &EcdfSummary) -> Result<Option<ExactComparison>> {
    let l_max = summary.raw.iter().copied().max().unwrap_or(0) as usize;
    let exact = match summary.spec.resolve()? {
        Resolved::Png { t, alpha_plus, alpha_minus } => png_cdf_exact(t, alpha_plus, alpha_minus, l_max),
        Resolved::Lpp { n, q, alpha_plus, alpha_minus } => match u32::try_from(n) {
            Ok(n) => lpp_cdf_exact(n, q, alpha_plus, alpha_minus, l_max),
            Err(_) => return Ok(None),
        },
    };
    let exact = match exact {
        Ok(e) => e,
        Err(Error::Envelope(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut counts = vec![0usize; l_max + 1];
    for &r in &summary.raw {
        counts[r as usize] += 1;
    }
    let cdf = exact.cdf();
    let n = summary.count as f64;
    let mut below = 0usize;
    let mut ks: f64 = 0.0;
    for (c, p) in counts.iter().zip(&cdf) {
        below += c;
        ks = ks.max((below as f64 / n - p).abs());
    }
    Ok(Some(ExactComparison { l_max, ks, flagged: exact.flagged(), cdf }))
}

/// Runs the sampler, measures the KS distance to `target` on the scaled
/// axis and, inside the exact module's envelope, the distance to the exact
/// finite-size CDF on the raw axis.
pub fn compare_report(
    model: Model,
    spec: &ScalingSpec,
    samples: usize,
    seed: u64,
    target: &DistributionTable,
) -> Result<CompareReport> {
    let start = Instant::now();
    check_pairing(spec.regime, target.kind)?;
    let summary = run_mc(model, spec, samples, seed)?;
    let ks = ks_distance(&summary, target);
    let (t_mean, t_var) = target.mean_variance()?;
    let exact = exact_comparison(&summary)?;
    Ok(CompareReport {
        model,
        regime: spec.regime,
        params: spec.params.clone(),
        n: summary.count,
        seed,
        mean: summary.mean,
        variance: summary.variance,
        ks,
        exact_available: exact.is_some(),
        runtime_ms: start.elapsed().as_millis() as u64,
        raw_mean: summary.raw_mean,
        raw_variance: summary.raw_variance,
        center: summary.map.center,
        scale: summary.map.scale,
        target: TargetSummary { kind: target.kind, params: target.params.clone(), mean: t_mean, variance: t_var },
        mean_delta: summary.mean - t_mean,
        variance_delta: summary.variance - t_var,
        exact,
        summary,
    })
}

impl CompareReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Contract(format!("report serialisation: {e}")))
    }

    /// `sample_index,raw,scaled` in sample order.
    pub fn write_samples_csv<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "sample_index,raw,scaled")?;
        let map = self.summary.map;
        for (i, &r) in self.summary.raw.iter().enumerate() {
            writeln!(out, "{i},{r},{:e}", map.apply(r as f64))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::cdf_table;
    use crate::painleve::PainleveTable;

    fn normal() -> DistributionTable {
        let pt = PainleveTable::default_table().unwrap();
        cdf_table(&pt, DistributionKind::Normal, &[]).unwrap()
    }

    fn strip_timing(r: &CompareReport) -> serde_json::Value {
        let mut v = serde_json::to_value(r).unwrap();
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    }

    #[test]
    fn reproducible_apart_from_timing() {
        let spec = ScalingSpec::new(Regime::PngGauss).with("t", 5.0).with("alpha_plus", 2.0);
        let dt = normal();
        let a = compare_report(Model::Png, &spec, 400, 21, &dt).unwrap();
        let b = compare_report(Model::Png, &spec, 400, 21, &dt).unwrap();
        assert_eq!(strip_timing(&a), strip_timing(&b));
        let c = compare_report(Model::Png, &spec, 400, 22, &dt).unwrap();
        assert_ne!(strip_timing(&a), strip_timing(&c));
    }

    #[test]
    fn schema_and_exact_section() {
        let spec = ScalingSpec::new(Regime::PngGauss).with("t", 3.0).with("alpha_plus", 2.0);
        let r = compare_report(Model::Png, &spec, 2000, 4, &normal()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for key in ["model", "regime", "params", "n", "seed", "mean", "variance", "ks", "exact_available", "runtime_ms"]
        {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["model"], "png");
        assert_eq!(v["regime"], "PNG_GAUSS");
        assert_eq!(v["n"], 2000);
        assert!(r.exact_available);
        let e = r.exact.as_ref().unwrap();
        assert_eq!(e.cdf.len(), e.l_max + 1);
        assert!(e.ks < 4.0 / (2000f64).sqrt(), "{}", e.ks);
        assert!((r.center + r.scale * r.mean - r.raw_mean).abs() < 1e-12 * r.raw_mean.abs().max(1.0));

        let mut buf = Vec::new();
        r.write_samples_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2001);
        assert!(text.starts_with("sample_index,raw,scaled\n0,"));
    }

    #[test]
    fn outside_the_exact_envelope() {
        let spec = ScalingSpec::new(Regime::PngGauss).with("t", 13.0).with("alpha_plus", 2.0);
        let r = compare_report(Model::Png, &spec, 100, 4, &normal()).unwrap();
        assert!(!r.exact_available && r.exact.is_none());
    }

    #[test]
    fn mismatched_target() {
        let spec = ScalingSpec::new(Regime::PngTw).with("t", 3.0);
        assert!(matches!(compare_report(Model::Png, &spec, 100, 0, &normal()), Err(Error::Parameter(_))));
    }
}
