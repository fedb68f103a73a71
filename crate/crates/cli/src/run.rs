use std::io::Write;

use pnglab::distributions::{cdf_table, DistributionKind, DistributionTable};
use pnglab::exact::{lpp_cdf_exact, png_cdf_exact, ExactCdf};
use pnglab::harness::{compare_report, Model, Regime, ScalingSpec, MIN_SAMPLES};
use pnglab::painleve::{solve_hastings_mcleod, PainleveTable, DEFAULT_STEP, DEFAULT_TOL, DEFAULT_X_HI, DEFAULT_X_LO};
use pnglab::sampler::{
    longest_weak_chain, lpp_last_passage, sample_lpp, sample_png_config, write_samples_csv, write_trajectory_csv,
    TasepParams, UpdateRule,
};
use rayon::prelude::*;

use crate::output::write_output;
use crate::settings::{Config, Manifest, Resolver};
use crate::{Cli, CliError, Command, CompareArgs, DistAction, ExactModel, SimModel};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if finite(name, v)? > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<f64, CliError> {
    if finite(name, v)? >= 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be nonnegative, got {v}")))
    }
}

fn unit_open(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must lie in (0, 1), got {v}")))
    }
}

fn below_inverse_root(name: &str, alpha: f64, q: f64) -> Result<(), CliError> {
    if alpha * q.sqrt() < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be below 1/√q = {}", 1.0 / q.sqrt())))
    }
}

fn resolve_threads(flag: Option<usize>, config: &Config) -> Result<usize, CliError> {
    let mut r = Resolver::new(config);
    let from_env = match std::env::var("PNGLAB_THREADS") {
        Ok(s) => Some(s.trim().parse::<usize>().map_err(|e| usage(format!("PNGLAB_THREADS={s}: {e}")))?),
        Err(_) => None,
    };
    let k = match r.opt("threads", flag)?.or(from_env) {
        Some(k) => k,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    if k == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    Ok(k)
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let threads = resolve_threads(cli.threads, &config)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))?;
    let mut r = Resolver::new(&config);
    match cli.command {
        Command::Dist { action } => dist(action, &mut r, threads),
        Command::Sim { model } => sim(model, &mut r, threads),
        Command::Exact { model } => exact(model, &mut r, threads),
        Command::Compare(args) => compare(args, &mut r, threads),
    }
}

/// Solves Painlevé II on a grid that contains `[xmin, xmax]` at the
/// requested step and covers at least the default domain; returns the
/// table and the index range of the requested window.
fn painleve_for(window: Option<(f64, f64, f64)>) -> Result<(PainleveTable, Option<(f64, f64)>), CliError> {
    match window {
        None => Ok((PainleveTable::default_table()?, None)),
        Some((xmin, xmax, step)) => {
            let x_lo = xmin - step * ((xmin - DEFAULT_X_LO).max(0.0) / step).ceil();
            let x_hi = xmax + step * ((DEFAULT_X_HI - xmax).max(0.0) / step).ceil();
            Ok((solve_hastings_mcleod(x_lo, x_hi, step, DEFAULT_TOL)?, Some((xmin, xmax))))
        }
    }
}

fn write_table(
    w: &mut dyn Write,
    table: &DistributionTable,
    window: Option<(f64, f64)>,
    with_pdf: bool,
) -> Result<(), CliError> {
    let g = table.grid;
    let (i0, i1) = match window {
        None => (0, g.count() - 1),
        Some((a, b)) => {
            let idx = |x: f64| ((x - g.x_lo()) / g.step()).round() as usize;
            (idx(a), idx(b).min(g.count() - 1))
        }
    };
    let pdf = if with_pdf { Some(table.density()?) } else { None };
    writeln!(w, "{}", if with_pdf { "x,cdf,pdf" } else { "x,cdf" })?;
    for i in i0..=i1 {
        match &pdf {
            Some(p) => writeln!(w, "{},{:e},{:e}", g.x(i), table.cdf[i], p[i])?,
            None => writeln!(w, "{},{:e}", g.x(i), table.cdf[i])?,
        }
    }
    Ok(())
}

fn dist(action: DistAction, r: &mut Resolver, threads: usize) -> Result<(), CliError> {
    let (args, name) = match action {
        DistAction::Table(a) => (a, "dist table"),
        DistAction::Mean(a) => (a, "dist mean"),
    };
    let kind: DistributionKind = r.required::<String>("which", args.which)?.parse()?;
    let w = r.opt("w", args.w)?;
    let w_plus = r.opt("w-plus", args.w_plus)?;
    let w_minus = r.opt("w-minus", args.w_minus)?;
    let params = match (kind.arity(), w, w_plus, w_minus) {
        (0, None, None, None) => vec![],
        (1, Some(w), None, None) => vec![finite("w", w)?],
        (2, None, Some(p), Some(m)) => vec![finite("w-plus", p)?, finite("w-minus", m)?],
        (0, ..) => return Err(usage(format!("{kind} takes no w parameter"))),
        (1, ..) => return Err(usage(format!("{kind} takes --w"))),
        _ => return Err(usage(format!("{kind} takes --w-plus and --w-minus"))),
    };
    let xmin = r.opt("xmin", args.xmin)?;
    let xmax = r.opt("xmax", args.xmax)?;
    let step = r.opt("step", args.step)?;
    let window = if xmin.is_some() || xmax.is_some() || step.is_some() {
        let (a, b, h) = (
            finite("xmin", xmin.unwrap_or(DEFAULT_X_LO))?,
            finite("xmax", xmax.unwrap_or(DEFAULT_X_HI))?,
            positive("step", step.unwrap_or(DEFAULT_STEP))?,
        );
        if a >= b {
            return Err(usage(format!("--xmin {a} must be below --xmax {b}")));
        }
        if h > 0.01 {
            return Err(usage(format!("--step must be at most 0.01, got {h}")));
        }
        Some((a, b, h))
    } else {
        None
    };
    let with_pdf = r.bool_flag("pdf", args.pdf)?;
    let out = r.or("out", args.out, "-".to_string())?;
    r.finish()?;
    Manifest::new(name, None, threads, &r.record).emit();

    let (pt, window) = painleve_for(window)?;
    let table = cdf_table(&pt, kind, &params)?;
    if name == "dist mean" {
        let summary = table.summary_json()?;
        write_output(&out, |w| {
            serde_json::to_writer_pretty(&mut *w, &summary).map_err(|e| usage(e.to_string()))?;
            writeln!(w)?;
            Ok(())
        })
    } else {
        write_output(&out, |w| write_table(w, &table, window, with_pdf))
    }
}

fn sim(model: SimModel, r: &mut Resolver, threads: usize) -> Result<(), CliError> {
    match model {
        SimModel::Png(a) => {
            let t = positive("t", r.required("t", a.t)?)?;
            let ap = nonnegative("alpha-plus", r.or("alpha-plus", a.alpha_plus, 0.0)?)?;
            let am = nonnegative("alpha-minus", r.or("alpha-minus", a.alpha_minus, 0.0)?)?;
            let samples = r.or("samples", a.common.samples, 1000)?;
            let seed = r.or("seed", a.common.seed, 0)?;
            let out = r.or("out", a.common.out, "-".to_string())?;
            r.finish()?;
            Manifest::new("sim png", Some(seed), threads, &r.record).emit();
            let values: Vec<u64> = (0..samples)
                .into_par_iter()
                .map(|i| sample_png_config(t, ap, am, seed, i).map(|c| longest_weak_chain(&c) as u64))
                .collect::<pnglab::Result<_>>()?;
            write_output(&out, |w| Ok(write_samples_csv(w, 0, &values)?))
        }
        SimModel::Lpp(a) => {
            let n = r.required("n", a.n)?;
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let q = unit_open("q", r.required("q", a.q)?)?;
            let ap = nonnegative("alpha-plus", r.or("alpha-plus", a.alpha_plus, 0.0)?)?;
            let am = nonnegative("alpha-minus", r.or("alpha-minus", a.alpha_minus, 0.0)?)?;
            below_inverse_root("alpha-plus", ap, q)?;
            below_inverse_root("alpha-minus", am, q)?;
            let corner = r.bool_flag("corner", a.corner)?;
            let samples = r.or("samples", a.common.samples, 1000)?;
            let seed = r.or("seed", a.common.seed, 0)?;
            let out = r.or("out", a.common.out, "-".to_string())?;
            r.finish()?;
            Manifest::new("sim lpp", Some(seed), threads, &r.record).emit();
            let values: Vec<u64> = (0..samples)
                .into_par_iter()
                .map(|i| sample_lpp(n, q, ap, am, seed, i).and_then(|inst| lpp_last_passage(&inst, corner)))
                .collect::<pnglab::Result<_>>()?;
            write_output(&out, |w| Ok(write_samples_csv(w, 0, &values)?))
        }
        SimModel::Tasep(a) => {
            let q = r.required("q", a.q)?;
            let params = TasepParams {
                q,
                alpha_plus: r.or("alpha-plus", a.alpha_plus, 0.0)?,
                alpha_minus: r.or("alpha-minus", a.alpha_minus, 0.0)?,
            };
            params.jump_probabilities()?;
            let steps: u64 = r.or("steps", a.steps, 100)?;
            let default_window = u32::try_from(steps.saturating_mul(4).saturating_add(16)).unwrap_or(u32::MAX);
            let window = r.or("window", a.window, default_window)?;
            if window < 2 {
                return Err(usage("--window must be at least 2"));
            }
            let rule: UpdateRule = r
                .or("update-rule", a.update_rule, "sequential-right-to-left".to_string())?
                .replace('-', "_")
                .parse()?;
            let seed = r.or("seed", a.seed, 0)?;
            let out = r.or("out", a.out, "-".to_string())?;
            r.finish()?;
            Manifest::new("sim tasep", Some(seed), threads, &r.record).emit();
            write_output(&out, |w| {
                write_trajectory_csv(w, params, steps, window, rule, seed, 0)?;
                Ok(())
            })
        }
    }
}

fn write_exact(out: &str, cdf: &ExactCdf) -> Result<(), CliError> {
    write_output(out, |w| Ok(cdf.write_csv(w)?))
}

fn exact(model: ExactModel, r: &mut Resolver, threads: usize) -> Result<(), CliError> {
    match model {
        ExactModel::Png(a) => {
            let t = positive("t", r.required("t", a.t)?)?;
            let ap = nonnegative("alpha-plus", r.or("alpha-plus", a.alpha_plus, 0.0)?)?;
            let am = nonnegative("alpha-minus", r.or("alpha-minus", a.alpha_minus, 0.0)?)?;
            let l_max = r.or("l-max", a.l_max, 50)?;
            let out = r.or("out", a.out, "-".to_string())?;
            r.finish()?;
            Manifest::new("exact png", None, threads, &r.record).emit();
            write_exact(&out, &png_cdf_exact(t, ap, am, l_max)?)
        }
        ExactModel::Lpp(a) => {
            let n = r.required("n", a.n)?;
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let q = unit_open("q", r.required("q", a.q)?)?;
            let ap = nonnegative("alpha-plus", r.or("alpha-plus", a.alpha_plus, 0.0)?)?;
            let am = nonnegative("alpha-minus", r.or("alpha-minus", a.alpha_minus, 0.0)?)?;
            below_inverse_root("alpha-plus", ap, q)?;
            below_inverse_root("alpha-minus", am, q)?;
            let l_max = r.or("l-max", a.l_max, 50)?;
            let out = r.or("out", a.out, "-".to_string())?;
            r.finish()?;
            Manifest::new("exact lpp", None, threads, &r.record).emit();
            write_exact(&out, &lpp_cdf_exact(n, q, ap, am, l_max)?)
        }
    }
}

fn compare(a: CompareArgs, r: &mut Resolver, threads: usize) -> Result<(), CliError> {
    let regime: Regime = r.required::<String>("regime", a.regime)?.parse()?;
    let model: Model = match r.opt::<String>("model", a.model)? {
        Some(m) => m.parse()?,
        None => regime.model(),
    };
    let samples = r.or("samples", a.samples, 4000)?;
    if samples < MIN_SAMPLES {
        return Err(usage(format!("--samples must be at least {MIN_SAMPLES}")));
    }
    let seed = r.or("seed", a.seed, 0)?;
    let mut spec = ScalingSpec::new(regime);
    let flags = [
        ("t", a.t),
        ("n", a.n),
        ("q", a.q),
        ("alpha-plus", a.alpha_plus),
        ("alpha-minus", a.alpha_minus),
        ("w-plus", a.w_plus),
        ("w-minus", a.w_minus),
    ];
    for (key, flag) in flags {
        if let Some(v) = r.opt(key, flag)? {
            spec = spec.with(&key.replace('-', "_"), v);
        }
    }
    spec.resolve()?;
    if regime.model() != model {
        return Err(usage(format!("regime {regime} does not apply to model {model}")));
    }
    let target = r.opt::<String>("target", a.target)?;
    let (kind, params) = match target {
        Some(name) => {
            let kind: DistributionKind = name.parse()?;
            let (wp, wm) = (spec.params.get("w_plus").copied(), spec.params.get("w_minus").copied());
            let params = match (kind.arity(), wp, wm) {
                (0, ..) => vec![],
                (1, Some(w), None) | (1, None, Some(w)) => vec![w],
                (2, Some(p), Some(m)) => vec![p, m],
                _ => return Err(usage(format!("target {kind} needs its w parameter(s) among --w-plus/--w-minus"))),
            };
            (kind, params)
        }
        None => spec.limit_law()?.ok_or_else(|| usage("no limit law is known for these parameters; pass --target"))?,
    };
    let out = r.or("out", a.out, "-".to_string())?;
    let samples_out = r.opt::<String>("samples-out", a.samples_out)?;
    r.finish()?;
    Manifest::new("compare", Some(seed), threads, &r.record).emit();

    let pt = PainleveTable::default_table()?;
    let table = cdf_table(&pt, kind, &params)?;
    let report = compare_report(model, &spec, samples, seed, &table)?;
    let json = report.to_json()?;
    write_output(&out, |w| Ok(writeln!(w, "{json}")?))?;
    if let Some(path) = samples_out {
        write_output(&path, |w| Ok(report.write_samples_csv(w)?))?;
    }
    Ok(())
}
