//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use pnglab::distributions::{cdf_table, DistributionKind};
use pnglab::exact::png_cdf_exact;
use pnglab::painleve::PainleveTable;
use pnglab::sampler::{longest_weak_chain_witness, sample_png_config};

/// Plot spacing; the underlying tables are much finer.
const PLOT_STEP: f64 = 0.05;
/// Keeps the page responsive.
const MAX_DEMO_T: f64 = 60.0;
const MAX_DEMO_L: usize = 120;

#[derive(Serialize)]
struct Curve {
    name: String,
    x: Vec<f64>,
    cdf: Vec<f64>,
}

/// CDF curves for a comma-separated list of distribution names on
/// `[xmin, xmax]`. `g` uses `w`; `h` uses `w_plus`, `w_minus`.
pub fn distribution_curves_json(
    names: &str,
    w: f64,
    w_plus: f64,
    w_minus: f64,
    xmin: f64,
    xmax: f64,
) -> Result<String, String> {
    if xmin.partial_cmp(&xmax) != Some(std::cmp::Ordering::Less) {
        return Err(format!("need xmin < xmax, got [{xmin}, {xmax}]"));
    }
    let pt = PainleveTable::default_table().map_err(|e| e.to_string())?;
    let count = ((xmax - xmin) / PLOT_STEP).round() as usize + 1;
    let xs: Vec<f64> = (0..count).map(|i| xmin + i as f64 * PLOT_STEP).collect();
    let mut curves = Vec::new();
    for name in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind: DistributionKind = name.parse().map_err(|e: pnglab::Error| e.to_string())?;
        let params = match kind.arity() {
            0 => vec![],
            1 => vec![w],
            _ => vec![w_plus, w_minus],
        };
        let table = cdf_table(&pt, kind, &params).map_err(|e| e.to_string())?;
        curves.push(Curve {
            name: if params.is_empty() { kind.to_string() } else { format!("{kind}{params:?}") },
            cdf: xs.iter().map(|&x| table.cdf_at(x)).collect(),
            x: xs.clone(),
        });
    }
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Sample {
    t: f64,
    interior: Vec<(f64, f64)>,
    bottom: Vec<f64>,
    left: Vec<f64>,
    chain: Vec<(f64, f64)>,
    length: usize,
}

/// One Poisson configuration on the unit square with a longest chain.
pub fn png_sample_json(t: f64, alpha_plus: f64, alpha_minus: f64, seed: u64) -> Result<String, String> {
    if t > MAX_DEMO_T {
        return Err(format!("the demo is limited to t <= {MAX_DEMO_T}"));
    }
    let cfg = sample_png_config(t, alpha_plus, alpha_minus, seed, 0).map_err(|e| e.to_string())?;
    let chain = longest_weak_chain_witness(&cfg);
    let s = Sample { t, length: chain.len(), chain, interior: cfg.interior, bottom: cfg.bottom, left: cfg.left };
    serde_json::to_string(&s).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ExactRows {
    l: Vec<usize>,
    cdf: Vec<f64>,
    flagged: usize,
    working_bits: usize,
}

/// `P(L(t) <= l)` for `l = 0..=l_max`.
pub fn exact_png_cdf_json(t: f64, alpha_plus: f64, alpha_minus: f64, l_max: usize) -> Result<String, String> {
    if l_max > MAX_DEMO_L {
        return Err(format!("the demo is limited to l_max <= {MAX_DEMO_L}"));
    }
    let c = png_cdf_exact(t, alpha_plus, alpha_minus, l_max).map_err(|e| e.to_string())?;
    let rows = ExactRows {
        l: c.rows.iter().map(|r| r.l).collect(),
        cdf: c.cdf(),
        flagged: c.flagged(),
        working_bits: c.working_bits,
    };
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn distribution_curves(
    names: &str,
    w: f64,
    w_plus: f64,
    w_minus: f64,
    xmin: f64,
    xmax: f64,
) -> Result<String, JsError> {
    distribution_curves_json(names, w, w_plus, w_minus, xmin, xmax).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn png_sample(t: f64, alpha_plus: f64, alpha_minus: f64, seed: u64) -> Result<String, JsError> {
    png_sample_json(t, alpha_plus, alpha_minus, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn exact_png_cdf(t: f64, alpha_plus: f64, alpha_minus: f64, l_max: usize) -> Result<String, JsError> {
    exact_png_cdf_json(t, alpha_plus, alpha_minus, l_max).map_err(|e| JsError::new(&e))
}
