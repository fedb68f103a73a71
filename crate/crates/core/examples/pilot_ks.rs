//! Seed-to-seed spread of the desk-scale convergence statistics.
//!
//! Prints mean and standard deviation over seeds 100..110 of the KS
//! distance and scaled mean for the three point-model regimes at t = 100
//! with 4000 samples. The fixture constants in `tests/harness.rs` come
//! from this run.
//!
//! cargo run --release -p pnglab --example pilot_ks

use pnglab::distributions::{cdf_table, DistributionKind};
use pnglab::harness::{ks_distance, run_mc, Model, Regime, ScalingSpec};
use pnglab::painleve::PainleveTable;

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

fn main() -> pnglab::Result<()> {
    let pt = PainleveTable::default_table()?;
    let t100 = |r| ScalingSpec::new(r).with("t", 100.0);
    let cases = [
        ("edge", t100(Regime::PngTw), DistributionKind::Gue),
        ("one source", t100(Regime::PngGauss).with("alpha_plus", 2.0), DistributionKind::Normal),
        (
            "two sources",
            t100(Regime::PngGauss).with("alpha_plus", 2.0).with("alpha_minus", 2.0),
            DistributionKind::NormalSquared,
        ),
    ];
    for (name, spec, kind) in cases {
        let target = cdf_table(&pt, kind, &[])?;
        let mut ks = Vec::new();
        let mut means = Vec::new();
        for seed in 100..110 {
            let e = run_mc(Model::Png, &spec, 4000, seed)?;
            ks.push(ks_distance(&e, &target));
            means.push(e.mean);
        }
        let (k, ks_sd) = mean_sd(&ks);
        let (m, m_sd) = mean_sd(&means);
        println!("{name:12} ks {k:.4} ± {ks_sd:.4}   mean {m:.4} ± {m_sd:.4}");
    }
    Ok(())
}
