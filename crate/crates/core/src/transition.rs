//! The transition functions a(x, w), b(x, w).
//!
//! They solve two compatible linear systems,
//!
//! ```text
//! ∂x a = u b,                       ∂x b = u a − 2w b,
//! ∂w a = 2u² a − (4wu + 2u') b,     ∂w b = (−4wu + 2u') a + (8w² − 2x − 2u²) b,
//! ```
//!
//! with a(x, 0) = E(x)², b(x, 0) = −E(x)², a → 1 as x → +∞ for w ≥ 0, and
//! the reflection a(x, w) = −b(x, −w) exp((8/3)w³ − 2xw).
//!
//! Two routes are implemented. The x-route integrates from deep in the left
//! tail, where the wanted solution is the growing mode, and fixes the scale
//! by a → 1 far to the right. The w-route integrates from w = 0 while the
//! fast mode e^{(8/3)w³ − 2xw} is decaying and, past its turning point,
//! runs backward from large w where the wanted solution is the slow mode.
//! Negative w always goes through the reflection.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ode::Dp45;
use crate::painleve::PainleveTable;
use crate::specfun::{airy_ai_ln, RealGrid};
use crate::{Error, Result};

/// Accuracy envelope for |w|.
pub const W_ENVELOPE: f64 = 6.0;
/// Largest abscissa the x-route will normalise against.
pub const X_CAPACITY: f64 = 100.0;

const RTOL: f64 = 1e-11;
const ATOL: f64 = 1e-300;
const LEFT_RUNUP: f64 = 10.0;
const NORM_EXPONENT: f64 = 40.0;

/// a and b sampled on a grid for one value of w.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionProfile {
    pub w: f64,
    pub grid: RealGrid,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TransitionProfile {
    /// CSV with columns x,a,b.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,a,b")?;
        for i in 0..self.grid.count() {
            writeln!(out, "{},{:e},{:e}", self.grid.x(i), self.a[i], self.b[i])?;
        }
        Ok(())
    }
}

/// a = a_m·e^{la}, b = b_m·e^{lb}.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogAb {
    pub a_m: f64,
    pub la: f64,
    pub b_m: f64,
    pub lb: f64,
}

impl LogAb {
    pub fn a(&self) -> f64 {
        self.a_m * self.la.exp()
    }
    pub fn b(&self) -> f64 {
        self.b_m * self.lb.exp()
    }
    /// The pair at −w: a(−w) = −b(w)·e^{2φ(−w)}, b(−w) = −a(w)·e^{2φ(−w)}
    /// with 2φ(w) = (8/3)w³ − 2xw.
    pub fn reflect(&self, x: f64, w: f64) -> LogAb {
        let s = two_phi(x, -w);
        LogAb { a_m: -self.b_m, la: self.lb + s, b_m: -self.a_m, lb: self.la + s }
    }
}

/// Product of two numbers held as mantissa and log scale.
pub(crate) fn log_product(m1: f64, l1: f64, m2: f64, l2: f64) -> f64 {
    m1 * m2 * (l1 + l2).exp()
}

/// (8/3)w³ − 2xw
fn two_phi(x: f64, w: f64) -> f64 {
    8.0 / 3.0 * w * w * w - 2.0 * x * w
}

/// Exponent controlling a − 1 far right: (2/3)x^{3/2} + 2wx − (8/3)w³.
fn right_decay(x: f64, w: f64) -> f64 {
    2.0 / 3.0 * x.max(0.0).powf(1.5) - two_phi(x, w)
}

fn normalisation_point(w: f64, beyond: f64) -> f64 {
    let mut x = beyond.max(0.0);
    while right_decay(x, w) < NORM_EXPONENT {
        x += 0.5;
    }
    x
}

/// u(x)·e^{s}, formed in log space right of the table where u underflows.
fn u_times_exp(pt: &PainleveTable, x: f64, s: f64) -> f64 {
    if x > pt.x_hi() && x > 0.0 {
        -(airy_ai_ln(x) + s).exp()
    } else {
        pt.u_anywhere(x).0 * s.exp()
    }
}

/// x-route for w ≥ 0 at ascending abscissae.
///
/// Integrates (a, β) with β = b·e^{2wx}, which keeps both components
/// within range on the right where b ~ e^{−2wx}:
/// a' = u e^{−2wx} β, β' = u e^{2wx} a.
pub(crate) fn xroute(pt: &PainleveTable, w: f64, xs: &[f64]) -> Result<Vec<LogAb>> {
    if !(w >= 0.0) {
        return Err(Error::Contract(format!("x-route needs w >= 0, got {w}")));
    }
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if xs.windows(2).any(|p| p[1] < p[0]) {
        return Err(Error::Contract("x-route abscissae must ascend".into()));
    }
    let x_last = *xs.last().unwrap();
    let x_norm = normalisation_point(w, x_last.max(pt.x_hi()));
    if x_norm > X_CAPACITY {
        return Err(Error::Range { what: "normalisation abscissa", value: x_norm, lo: pt.x_lo(), hi: X_CAPACITY });
    }
    let x_start = xs[0].min(pt.x_lo()) - LEFT_RUNUP;

    // left-tail eigenvector of [[0, u], [u, −2w]] for the growing mode
    let u0 = pt.u_anywhere(x_start).0;
    let lam = -w + (w * w + u0 * u0).sqrt();
    let mut y = [1.0, lam / u0 * (2.0 * w * x_start).exp()];
    let mut log_scale = 0.0;
    let mut x = x_start;
    let mut stepper = Dp45::new(RTOL, ATOL, 0.01);
    let rhs = |x: f64, y: &[f64; 2]| [u_times_exp(pt, x, -2.0 * w * x) * y[1], u_times_exp(pt, x, 2.0 * w * x) * y[0]];

    let mut out = Vec::with_capacity(xs.len());
    for &target in xs.iter().chain(std::iter::once(&x_norm)) {
        y = stepper.advance(rhs, x, y, target)?;
        x = target;
        let m = y[0].abs().max(y[1].abs());
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::SolverFailure { iterations: 0, residual: m });
        }
        y = [y[0] / m, y[1] / m];
        log_scale += m.ln();
        out.push(LogAb { a_m: y[0], la: log_scale, b_m: y[1], lb: log_scale - 2.0 * w * x });
    }
    let norm = out.pop().unwrap();
    if !(norm.a_m > 0.0) {
        return Err(Error::SolverFailure { iterations: 0, residual: norm.a_m });
    }
    for p in out.iter_mut() {
        p.a_m /= norm.a_m;
        p.b_m /= norm.a_m;
        p.la -= norm.la;
        p.lb -= norm.la;
    }
    Ok(out)
}

/// x-route for any real w, via the reflection when w < 0.
pub(crate) fn xroute_any(pt: &PainleveTable, w: f64, xs: &[f64]) -> Result<Vec<LogAb>> {
    if w >= 0.0 {
        xroute(pt, w, xs)
    } else {
        Ok(xroute(pt, -w, xs)?.iter().zip(xs).map(|(p, &x)| p.reflect(x, -w)).collect())
    }
}

/// a and b on the table grid by the x-route; requires w ≥ 0.
pub fn ab_profile_x(pt: &PainleveTable, w: f64) -> Result<TransitionProfile> {
    if !(w >= 0.0) {
        return Err(Error::Contract(format!("ab_profile_x needs w >= 0 (use the reflection for negative w), got {w}")));
    }
    ab_profile_on(pt, w, &pt.grid)
}

/// a and b on an arbitrary grid, any sign of w.
pub fn ab_profile_on(pt: &PainleveTable, w: f64, grid: &RealGrid) -> Result<TransitionProfile> {
    if !(w.abs() <= W_ENVELOPE) {
        return Err(Error::Envelope(format!("|w| must be <= {W_ENVELOPE}, got {w}")));
    }
    let xs = grid.abscissae();
    let pts = xroute_any(pt, w, &xs)?;
    Ok(TransitionProfile {
        w,
        grid: *grid,
        a: pts.iter().map(LogAb::a).collect(),
        b: pts.iter().map(LogAb::b).collect(),
    })
}

struct WSystem {
    x: f64,
    u: f64,
    up: f64,
}

impl WSystem {
    fn rhs(&self, w: f64, y: &[f64; 2]) -> [f64; 2] {
        let (x, u, up) = (self.x, self.u, self.up);
        [
            2.0 * u * u * y[0] - (4.0 * w * u + 2.0 * up) * y[1],
            (-4.0 * w * u + 2.0 * up) * y[0] + (8.0 * w * w - 2.0 * x - 2.0 * u * u) * y[1],
        ]
    }
}

/// Straight integration of the w-system from (E², −E²) at w = 0 to w.
/// Only reliable while the fast mode is not growing along the path; kept
/// as an independent check of the reflection formula.
#[cfg(test)]
pub(crate) fn ab_direct(pt: &PainleveTable, x: f64, w: f64) -> Result<(f64, f64)> {
    let p = pt.eval(x)?;
    let sys = WSystem { x, u: p.u, up: p.u_prime };
    let e2 = p.e * p.e;
    let mut stepper = Dp45::new(1e-12, ATOL, 0.01);
    let y = stepper.advance(|w, y| sys.rhs(w, y), 0.0, [e2, -e2], w)?;
    Ok((y[0], y[1]))
}

/// w-route for w ≥ 0.
fn ab_w_nonneg(pt: &PainleveTable, x: f64, w: f64) -> Result<(f64, f64)> {
    let p = pt.eval(x)?;
    let e2 = p.e * p.e;
    if w == 0.0 {
        return Ok((e2, -e2));
    }
    let sys = WSystem { x, u: p.u, up: p.u_prime };
    let turn = 0.5 * x.max(0.0).sqrt();

    let mut fwd = Dp45::new(RTOL, ATOL, 0.01);
    let at_turn = fwd.advance(|w, y| sys.rhs(w, y), 0.0, [e2, -e2], w.min(turn))?;
    if w <= turn {
        return Ok((at_turn[0], at_turn[1]));
    }

    // backward from far out, where only the slow mode survives
    let phi = |s: f64| 0.5 * two_phi(x, s);
    let need = 60.0 + e2.ln().abs();
    let mut big_w = w + 0.5;
    while 2.0 * (phi(big_w) - phi(w)) < need {
        big_w += 0.25;
    }
    let d = 2.0 * p.u_prime - 4.0 * big_w * p.u;
    let start = [1.0, -d / (8.0 * big_w * big_w - 2.0 * x)];
    let mut back = Dp45::new(RTOL, ATOL, 1e-3);
    let at_w = back.advance(|w, y| sys.rhs(w, y), big_w, start, w)?;
    let back_turn = back.advance(|w, y| sys.rhs(w, y), w, at_w, turn)?;
    let scale = at_turn[0] / back_turn[0];
    Ok((scale * at_w[0], scale * at_w[1]))
}

/// a(x, w) and b(x, w) by the w-route.
pub fn ab_at(pt: &PainleveTable, x: f64, w: f64) -> Result<(f64, f64)> {
    if !(w.abs() <= W_ENVELOPE) {
        return Err(Error::Envelope(format!("|w| must be <= {W_ENVELOPE}, got {w}")));
    }
    if !pt.grid.contains(x) {
        return Err(Error::Range { what: "x", value: x, lo: pt.x_lo(), hi: pt.x_hi() });
    }
    if w >= 0.0 {
        return ab_w_nonneg(pt, x, w);
    }
    let (a, b) = ab_w_nonneg(pt, x, -w)?;
    let f = two_phi(x, w).exp();
    Ok((-b * f, -a * f))
}

/// a(2y√|w| + 4w², w) for w ≤ −1.5, which tends to Φ(y) as w → −∞.
pub fn erf_limit_check(pt: &PainleveTable, w: f64, y: f64) -> Result<f64> {
    if !(w <= -1.5) {
        return Err(Error::Parameter(format!("erf limit check needs w <= -1.5, got {w}")));
    }
    if !(w.abs() <= W_ENVELOPE) {
        return Err(Error::Envelope(format!("|w| must be <= {W_ENVELOPE}, got {w}")));
    }
    let x = 2.0 * y * w.abs().sqrt() + 4.0 * w * w;
    if !(x <= X_CAPACITY) || x < pt.x_lo() {
        return Err(Error::Range { what: "scaled abscissa", value: x, lo: pt.x_lo(), hi: X_CAPACITY });
    }
    let p = xroute_any(pt, w, &[x])?;
    Ok(p[0].a())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::normal_cdf;
    use std::sync::OnceLock;

    fn table() -> &'static PainleveTable {
        static T: OnceLock<PainleveTable> = OnceLock::new();
        T.get_or_init(|| PainleveTable::default_table().unwrap())
    }

    #[test]
    fn zero_w_reduces_to_e_squared() {
        let t = table();
        let prof = ab_profile_x(t, 0.0).unwrap();
        for i in 0..t.grid.count() {
            let e2 = t.e[i] * t.e[i];
            assert!((prof.a[i] - e2).abs() < 1e-8, "x = {}", t.grid.x(i));
            assert!((prof.b[i] + e2).abs() < 1e-8);
        }
        let (a, b) = ab_at(t, 0.3, 0.0).unwrap();
        let e = t.eval(0.3).unwrap().e;
        assert_eq!((a, b), (e * e, -e * e));
    }

    #[test]
    fn routes_agree() {
        let t = table();
        for &w in &[0.25, 0.5, 1.0, 2.0] {
            let prof = ab_profile_x(t, w).unwrap();
            let mut worst = 0.0_f64;
            for i in (0..t.grid.count()).step_by(7) {
                let (a, b) = ab_at(t, t.grid.x(i), w).unwrap();
                worst = worst.max((a - prof.a[i]).abs()).max((b - prof.b[i]).abs() / prof.b[i].abs().max(1.0));
            }
            assert!(worst < 1e-6, "w = {w}: {worst:e}");
        }
    }

    #[test]
    fn reflection_against_direct_integration() {
        let t = table();
        for &w in &[0.5, 1.0] {
            for &x in &[-4.0, -2.0, 0.0, 1.5, 3.0] {
                let (a_neg, b_neg) = ab_direct(t, x, -w).unwrap();
                let (a_pos, b_pos) = ab_at(t, x, w).unwrap();
                let f = two_phi(x, w).exp();
                let r1 = (a_pos + b_neg * f).abs() / a_pos.abs().max(1e-300);
                let r2 = (b_pos + a_neg * f).abs() / b_pos.abs().max(1e-300);
                assert!(r1 < 1e-6 && r2 < 1e-6, "x = {x}, w = {w}: {r1:e} {r2:e}");
            }
        }
    }

    #[test]
    fn reflection_is_an_involution() {
        let p = LogAb { a_m: 0.7, la: 3.0, b_m: -0.2, lb: -1.5 };
        let (x, w) = (1.3, 0.8);
        let back = p.reflect(x, w).reflect(x, -w);
        assert!((back.a() - p.a()).abs() < 1e-9 * p.a().abs());
        assert!((back.b() - p.b()).abs() < 1e-9 * p.b().abs());
    }

    #[test]
    fn right_limit_and_large_w() {
        let t = table();
        let prof = ab_profile_x(t, 1.0).unwrap();
        assert!((prof.a.last().unwrap() - 1.0).abs() < 1e-6);
        for &x in &[2.0, 4.0, 7.0] {
            let (a, _) = ab_at(t, x, 5.0).unwrap();
            assert!((a - 1.0).abs() < 2e-4, "x = {x}: {a}");
        }
    }

    #[test]
    fn left_tail_ratio() {
        // a and b share their leading left-tail behaviour up to sign; the
        // ratio approaches −1 like the frozen-coefficient eigenvector
        // u / (√(w² + u²) − w), whose deviation from −1 is of order w/|u|
        let t = table();
        let w = 1.0;
        let xs = [-28.0, -20.0, -9.0];
        let pts = xroute(t, w, &xs).unwrap();
        let mut last_gap = 0.0;
        for (k, (p, &x)) in pts.iter().zip(&xs).enumerate() {
            let r = p.a() / p.b();
            let u = t.u_anywhere(x).0;
            let frozen = u / ((w * w + u * u).sqrt() - w);
            assert!((r - frozen).abs() < 5e-2, "x = {x}: {r} vs {frozen}");
            let gap = (r + 1.0).abs();
            if k > 0 {
                assert!(gap > last_gap);
            }
            last_gap = gap;
        }
    }

    #[test]
    fn positive_and_increasing_in_w() {
        let t = table();
        let mut prev: Option<TransitionProfile> = None;
        for k in 0..=8 {
            let w = 0.5 * k as f64;
            let prof = ab_profile_x(t, w).unwrap();
            assert!(prof.a.iter().all(|&a| a > 0.0), "w = {w}");
            if let Some(p) = &prev {
                for &x in &[-2.0, 0.0, 2.0] {
                    let i = t.grid.locate(x).unwrap().0;
                    assert!(prof.a[i] >= p.a[i] - 1e-12, "x = {x}, w = {w}");
                }
            }
            prev = Some(prof);
        }
    }

    #[test]
    fn negative_w_profile_matches_w_route() {
        let t = table();
        let prof = ab_profile_on(t, -0.5, &t.grid).unwrap();
        for &x in &[-3.0, 0.0, 2.5, 6.0] {
            let i = t.grid.locate(x).unwrap().0;
            let (a, b) = ab_at(t, t.grid.x(i), -0.5).unwrap();
            assert!((a - prof.a[i]).abs() < 1e-6 * a.abs().max(1.0), "x = {x}");
            assert!((b - prof.b[i]).abs() < 1e-6 * b.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn gaussian_limit_along_moving_frame() {
        let t = table();
        let half = erf_limit_check(t, -2.5, 0.0).unwrap();
        assert!((half - 0.5).abs() < 0.03, "{half}");
        let three = erf_limit_check(t, -2.5, 3.0).unwrap();
        assert!((three - normal_cdf(3.0)).abs() < 0.03, "{three}");
        let d15 = (erf_limit_check(t, -1.5, 1.0).unwrap() - normal_cdf(1.0)).abs();
        let d25 = (erf_limit_check(t, -2.5, 1.0).unwrap() - normal_cdf(1.0)).abs();
        assert!(d25 < d15, "{d25} vs {d15}");
    }

    #[test]
    fn envelope_and_contract_errors() {
        let t = table();
        assert!(matches!(ab_at(t, 0.0, 6.5), Err(Error::Envelope(_))));
        assert!(matches!(ab_at(t, 9.0, 1.0), Err(Error::Range { .. })));
        assert!(matches!(ab_profile_x(t, -1.0), Err(Error::Contract(_))));
        assert!(erf_limit_check(t, -1.0, 0.0).is_err());
        assert!(matches!(erf_limit_check(t, -5.0, 1.0), Err(Error::Range { .. })));
    }
}
