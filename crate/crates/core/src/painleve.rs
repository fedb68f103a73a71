//! The Hastings–McLeod solution of Painlevé II, u'' = 2u³ + xu with
//! u ~ −Ai(x) as x → +∞, tabulated together with
//!
//! * v(x) = ∫_∞^x u(s)² ds,
//! * E(x) = exp(½ ∫_x^∞ u(s) ds),
//! * F(x) = exp(½ ∫_x^∞ v(s) ds).
//!
//! u is found by a Newton solve of the Numerov discretisation with Dirichlet
//! data at both ends. Integrals are cumulative quadratures from the right
//! plus closed-form Airy tails beyond the grid.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::specfun::{airy_ai, airy_ai_integral, airy_ai_sq_integral, airy_ai_sq_moment, integrate_sampled, RealGrid};
use crate::{Error, Result};

pub const DEFAULT_X_LO: f64 = -10.0;
pub const DEFAULT_X_HI: f64 = 8.0;
pub const DEFAULT_STEP: f64 = 0.005;
pub const DEFAULT_TOL: f64 = 1e-11;

const MAX_NEWTON: usize = 50;

/// Sampled Hastings–McLeod data on a uniform grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PainleveTable {
    pub grid: RealGrid,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub v: Vec<f64>,
    /// E(x)
    pub e: Vec<f64>,
    /// F(x)
    pub f: Vec<f64>,
}

/// Point values of the tabulated functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainleveValues {
    pub u: f64,
    pub u_prime: f64,
    pub v: f64,
    pub e: f64,
    pub f: f64,
}

impl PainleveValues {
    /// y(x) = x + 2u'(x) + 2u(x)², which satisfies y' = 1 + 2uy.
    pub fn aux_y(&self, x: f64) -> f64 {
        x + 2.0 * self.u_prime + 2.0 * self.u * self.u
    }
}

/// Large negative x expansion of the Hastings–McLeod solution.
pub fn left_asymptotic(x: f64) -> f64 {
    let t = 1.0 / (x * x * x);
    let series = 1.0 + t * (1.0 / 8.0 + t * (-73.0 / 128.0 + t * (10657.0 / 1024.0 + t * (-13_912_277.0 / 32768.0))));
    -(-x / 2.0).sqrt() * series
}

/// Leading behaviour of u' for large negative x (derivative of the
/// expansion above, truncated at the same order).
pub fn left_asymptotic_prime(x: f64) -> f64 {
    let h = 1e-5 * x.abs().max(1.0);
    (left_asymptotic(x + h) - left_asymptotic(x - h)) / (2.0 * h)
}

fn rhs(x: f64, u: f64) -> f64 {
    2.0 * u * u * u + x * u
}

fn rhs_u(x: f64, u: f64) -> f64 {
    6.0 * u * u + x
}

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    if d == 0.0 {
        return Err(Error::SolverFailure { iterations: 0, residual: f64::NAN });
    }
    c[0] = upper[0] / d;
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - lower[i] * c[i - 1];
        if d == 0.0 || !d.is_finite() {
            return Err(Error::SolverFailure { iterations: 0, residual: f64::NAN });
        }
        if i + 1 < n {
            c[i] = upper[i] / d;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

fn numerov_residual(xs: &[f64], u: &[f64], h2: f64) -> Vec<f64> {
    let n = u.len();
    let mut r = vec![0.0; n];
    for i in 1..n - 1 {
        let f = |j: usize| rhs(xs[j], u[j]);
        r[i] = u[i + 1] - 2.0 * u[i] + u[i - 1] - h2 / 12.0 * (f(i + 1) + 10.0 * f(i) + f(i - 1));
    }
    r
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Solves for the Hastings–McLeod solution on [x_lo, x_hi] and tabulates
/// u, u', v, E, F.
pub fn solve_hastings_mcleod(x_lo: f64, x_hi: f64, step: f64, tol: f64) -> Result<PainleveTable> {
    if !(x_lo <= -8.0) {
        return Err(Error::Parameter(format!("x_lo must be <= -8, got {x_lo}")));
    }
    if !(x_hi >= 6.0) {
        return Err(Error::Parameter(format!("x_hi must be >= 6, got {x_hi}")));
    }
    if !(step > 0.0 && step <= 0.01) {
        return Err(Error::Parameter(format!("step must be in (0, 0.01], got {step}")));
    }
    if !(tol >= 1e-13) {
        return Err(Error::Parameter(format!("tol must be >= 1e-13, got {tol}")));
    }
    let grid = RealGrid::new(x_lo, x_hi, step)?;
    let n = grid.count();
    let h = grid.step();
    let h2 = h * h;
    let xs = grid.abscissae();

    // start from −Ai on the right blended into −sqrt(−x/2) on the left
    let mut u: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let s = 1.0 / (1.0 + (2.0 * x).exp());
            -(1.0 - s) * airy_ai(x).0 - s * (x.min(0.0) / -2.0).sqrt()
        })
        .collect();
    u[0] = left_asymptotic(xs[0]);
    u[n - 1] = -airy_ai(xs[n - 1]).0;

    let mut converged = false;
    let mut res = numerov_residual(&xs, &u, h2);
    let mut res_norm = max_abs(&res);
    for iter in 0..MAX_NEWTON {
        let mut lower = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut upper = vec![0.0; n];
        let mut delta = vec![0.0; n];
        for i in 1..n - 1 {
            lower[i] = 1.0 - h2 / 12.0 * rhs_u(xs[i - 1], u[i - 1]);
            diag[i] = -2.0 - 10.0 * h2 / 12.0 * rhs_u(xs[i], u[i]);
            upper[i] = 1.0 - h2 / 12.0 * rhs_u(xs[i + 1], u[i + 1]);
            delta[i] = -res[i];
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut delta)?;
        let update = max_abs(&delta);

        // damped step: halve until the residual does not grow
        let mut lambda = 1.0;
        let mut trial;
        loop {
            trial = u.iter().zip(&delta).map(|(a, d)| a + lambda * d).collect::<Vec<_>>();
            let r = numerov_residual(&xs, &trial, h2);
            let norm = max_abs(&r);
            if norm.is_finite() && (norm <= res_norm || lambda < 1e-3) {
                res = r;
                res_norm = norm;
                break;
            }
            lambda *= 0.5;
        }
        u = trial;
        if lambda * update < tol {
            converged = true;
            break;
        }
        if iter + 1 == MAX_NEWTON {
            return Err(Error::SolverFailure { iterations: MAX_NEWTON, residual: res_norm });
        }
    }
    if !converged {
        return Err(Error::SolverFailure { iterations: MAX_NEWTON, residual: res_norm });
    }

    let f: Vec<f64> = xs.iter().zip(&u).map(|(&x, &u)| rhs(x, u)).collect();
    let mut u_prime = vec![0.0; n];
    for i in 1..n - 1 {
        u_prime[i] = (u[i + 1] - u[i - 1]) / (2.0 * h) - h * (f[i + 1] - f[i - 1]) / 12.0;
    }
    // ends: u(x1) − u(x0) = h u'(x0) + ∫_{x0}^{x1} (x1 − s) u''(s) ds with u'' cubic
    u_prime[0] = (u[1] - u[0]) / h - h * (97.0 * f[0] + 114.0 * f[1] - 39.0 * f[2] + 8.0 * f[3]) / 360.0;
    u_prime[n - 1] =
        (u[n - 1] - u[n - 2]) / h + h * (97.0 * f[n - 1] + 114.0 * f[n - 2] - 39.0 * f[n - 3] + 8.0 * f[n - 4]) / 360.0;

    let u_sq: Vec<f64> = u.iter().map(|u| u * u).collect();
    let tail_u_sq = airy_ai_sq_integral(x_hi);
    let v: Vec<f64> = integrate_sampled(&grid, &u_sq)?.iter().map(|r| -(r + tail_u_sq)).collect();

    let tail_u = -airy_ai_integral(x_hi);
    let e: Vec<f64> = integrate_sampled(&grid, &u)?.iter().map(|r| (0.5 * (r + tail_u)).exp()).collect();

    let tail_v = -airy_ai_sq_moment(x_hi);
    let f_vals: Vec<f64> = integrate_sampled(&grid, &v)?.iter().map(|r| (0.5 * (r + tail_v)).exp()).collect();

    Ok(PainleveTable { grid, u, u_prime, v, e, f: f_vals })
}

fn hermite(p0: f64, d0: f64, p1: f64, d1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * p0 + h * h10 * d0 + h01 * p1 + h * h11 * d1
}

impl PainleveTable {
    /// Table on the default domain [−10, 8] with step 0.005.
    pub fn default_table() -> Result<Self> {
        solve_hastings_mcleod(DEFAULT_X_LO, DEFAULT_X_HI, DEFAULT_STEP, DEFAULT_TOL)
    }

    pub fn x_lo(&self) -> f64 {
        self.grid.x(0)
    }

    pub fn x_hi(&self) -> f64 {
        self.grid.x_hi()
    }

    pub fn at_index(&self, i: usize) -> PainleveValues {
        PainleveValues { u: self.u[i], u_prime: self.u_prime[i], v: self.v[i], e: self.e[i], f: self.f[i] }
    }

    /// Piecewise cubic Hermite interpolation using the exact derivatives
    /// u'' = 2u³ + xu, v' = u², E' = −uE/2, F' = −vF/2.
    pub fn eval(&self, x: f64) -> Result<PainleveValues> {
        let (i, off) =
            self.grid.locate(x).ok_or(Error::Range { what: "x", value: x, lo: self.x_lo(), hi: self.x_hi() })?;
        if off == 0.0 {
            return Ok(self.at_index(i));
        }
        let h = self.grid.step();
        let s = off / h;
        let (x0, x1) = (self.grid.x(i), self.grid.x(i + 1));
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (p0, p1) = (self.u_prime[i], self.u_prime[i + 1]);
        let (v0, v1) = (self.v[i], self.v[i + 1]);
        let (e0, e1) = (self.e[i], self.e[i + 1]);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        Ok(PainleveValues {
            u: hermite(u0, p0, u1, p1, h, s),
            u_prime: hermite(p0, rhs(x0, u0), p1, rhs(x1, u1), h, s),
            v: hermite(v0, u0 * u0, v1, u1 * u1, h, s),
            e: hermite(e0, -0.5 * u0 * e0, e1, -0.5 * u1 * e1, h, s),
            f: hermite(f0, -0.5 * v0 * f0, f1, -0.5 * v1 * f1, h, s),
        })
    }

    /// As `eval`, but to the right of the grid the Airy tail forms are used
    /// (u = −Ai up to terms of order Ai³).
    pub fn eval_extended(&self, x: f64) -> Result<PainleveValues> {
        if x <= self.x_hi() {
            return self.eval(x);
        }
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite x {x}")));
        }
        let (ai, aip) = airy_ai(x);
        Ok(PainleveValues {
            u: -ai,
            u_prime: -aip,
            v: -airy_ai_sq_integral(x),
            e: (-0.5 * airy_ai_integral(x)).exp(),
            f: (-0.5 * airy_ai_sq_moment(x)).exp(),
        })
    }

    /// Values at every point of a grid that starts on this table's grid
    /// and may run past its right end.
    pub fn values_on(&self, grid: &RealGrid) -> Result<Vec<PainleveValues>> {
        let n_table = self.grid.count();
        let mut out: Vec<PainleveValues> = Vec::with_capacity(grid.count());
        let mut beyond = Vec::new();
        for i in 0..grid.count() {
            let x = grid.x(i);
            if x <= self.x_hi() {
                out.push(if i < n_table && grid.x_lo() == self.x_lo() { self.at_index(i) } else { self.eval(x)? });
            } else {
                beyond.push(x);
            }
        }
        if beyond.is_empty() {
            return Ok(out);
        }
        // one running quadrature of Ai over the extension instead of a tail
        // integral per point
        let x_end = *beyond.last().unwrap();
        let start = self.x_hi();
        let steps = ((x_end - start) / grid.step()).ceil().max(2.0) as usize;
        let ext = RealGrid::new(start, start + steps as f64 * grid.step(), grid.step())?;
        let ai: Vec<f64> = ext.abscissae().iter().map(|&x| airy_ai(x).0).collect();
        let run = integrate_sampled(&ext, &ai)?;
        let tail = airy_ai_integral(ext.x_hi());
        for x in beyond {
            let (k, off) = ext.locate(x).expect("inside extension");
            let int_ai = if off.abs() < 1e-9 * grid.step() {
                run[k] + tail
            } else if (off - ext.step()).abs() < 1e-9 * grid.step() {
                run[k + 1] + tail
            } else {
                airy_ai_integral(x)
            };
            let (ai, aip) = airy_ai(x);
            out.push(PainleveValues {
                u: -ai,
                u_prime: -aip,
                v: -airy_ai_sq_integral(x),
                e: (-0.5 * int_ai).exp(),
                f: (-0.5 * airy_ai_sq_moment(x)).exp(),
            });
        }
        Ok(out)
    }

    /// u and u' only, with Airy data right of the grid and the asymptotic
    /// series left of it.
    pub fn u_anywhere(&self, x: f64) -> (f64, f64) {
        if x > self.x_hi() {
            let (ai, aip) = airy_ai(x);
            (-ai, -aip)
        } else if x < self.x_lo() {
            (left_asymptotic(x), left_asymptotic_prime(x))
        } else {
            let v = self.eval(x).expect("x checked in range");
            (v.u, v.u_prime)
        }
    }

    /// y(x) = x + 2u'(x) + 2u(x)².
    pub fn aux_y(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.aux_y(x))
    }

    /// CSV with columns x,u,u_prime,v,E,F.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,u,u_prime,v,E,F")?;
        for i in 0..self.grid.count() {
            writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{:e}",
                self.grid.x(i),
                self.u[i],
                self.u_prime[i],
                self.v[i],
                self.e[i],
                self.f[i]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn table() -> &'static PainleveTable {
        static T: OnceLock<PainleveTable> = OnceLock::new();
        T.get_or_init(|| PainleveTable::default_table().unwrap())
    }

    #[test]
    fn right_boundary_follows_airy() {
        let t = table();
        let (ai, _) = airy_ai(6.0);
        let u = t.eval(6.0).unwrap().u;
        assert!((u + ai).abs() < 1e-8);
    }

    #[test]
    fn left_boundary_follows_square_root() {
        let u = table().eval(-8.0).unwrap().u;
        assert!((u + 2.0).abs() / 2.0 < 0.02);
    }

    #[test]
    fn first_integral_holds_on_grid() {
        let t = table();
        let mut worst = 0.0_f64;
        for i in 0..t.grid.count() {
            let x = t.grid.x(i);
            let (u, p) = (t.u[i], t.u_prime[i]);
            worst = worst.max((t.v[i] - (u.powi(4) + x * u * u - p * p)).abs());
        }
        assert!(worst < 1e-8, "residual {worst:e}");
    }

    #[test]
    fn negative_and_monotone_quantities() {
        let t = table();
        assert!(t.u.iter().all(|&u| u < 0.0));
        for w in t.v.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for i in 0..t.grid.count() {
            assert!(t.e[i] > 0.0 && t.e[i] <= 1.0);
            assert!(t.f[i] >= 0.0 && t.f[i] <= 1.0);
        }
        for w in t.e.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in t.f.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert!(t.v.last().unwrap().abs() < 1e-15);
        let fgue_lo = t.f[0].powi(2);
        let fgue_hi = t.f.last().unwrap().powi(2);
        assert!(fgue_lo < 1e-8 && (1.0 - fgue_hi) < 1e-8);
    }

    #[test]
    fn reproduces_knots_and_right_end() {
        let t = table();
        let i = 1234;
        let v = t.eval(t.grid.x(i)).unwrap();
        assert_eq!(v.u, t.u[i]);
        assert_eq!(v.f, t.f[i]);
        let end = t.eval(8.0).unwrap();
        let (ai, aip) = airy_ai(8.0);
        assert!((end.u + ai).abs() < 1e-15 && (end.u_prime + aip).abs() < 1e-12);
        assert!(end.v.abs() < 1e-14 && (1.0 - end.e) < 1e-7 && (1.0 - end.f) < 1e-14);
        assert!(t.eval(8.01).is_err() && t.eval(-10.5).is_err());
    }

    #[test]
    fn grid_halving_and_midpoints() {
        let coarse = table();
        let fine = solve_hastings_mcleod(-10.0, 8.0, 0.0025, 1e-12).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..coarse.grid.count() {
            worst = worst.max((coarse.u[i] - fine.u[2 * i]).abs());
        }
        assert!(worst < 1e-9, "halving change {worst:e}");
        for k in -20..20 {
            let x = 0.0025 + 0.005 * k as f64;
            let a = coarse.eval(x).unwrap();
            let b = fine.eval(x).unwrap();
            assert!((a.u - b.u).abs() < 1e-9 && (a.u_prime - b.u_prime).abs() < 1e-9, "x = {x}");
            assert!((a.f - b.f).abs() < 1e-9 && (a.e - b.e).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn aux_y_ode_and_asymptotics() {
        let t = table();
        let h = 1e-3;
        let mut x = -9.5;
        while x < 7.5 {
            let d = (t.aux_y(x + h).unwrap() - t.aux_y(x - h).unwrap()) / (2.0 * h);
            let u = t.eval(x).unwrap().u;
            let resid = d - (1.0 + 2.0 * u * t.aux_y(x).unwrap());
            assert!(resid.abs() < 1e-5, "x = {x}: {resid:e}");
            x += 0.37;
        }
        assert!((t.aux_y(-9.0).unwrap() - 1.0 / 18.0_f64.sqrt()).abs() < 0.01);
        assert!((t.aux_y(6.0).unwrap() - 6.0).abs() < 1e-3);
    }

    #[test]
    fn e4_y_integral_identity() {
        // E⁴y − ∫_{x_lo}^x E⁴ is constant and tiny
        let t = table();
        let g = &t.grid;
        let e4: Vec<f64> = t.e.iter().map(|e| e.powi(4)).collect();
        let run = integrate_sampled(g, &e4).unwrap();
        let total = run[0];
        let mut c0 = None;
        for i in (0..g.count()).step_by(50) {
            let y = t.aux_y(g.x(i)).unwrap();
            let c = e4[i] * y - (total - run[i]);
            let c0 = *c0.get_or_insert(c);
            assert!(c0.abs() < 1e-6);
            assert!((c - c0).abs() < 1e-6, "x = {}", g.x(i));
        }
    }

    #[test]
    fn extended_matches_table_at_edge() {
        let t = table();
        let a = t.eval(8.0).unwrap();
        let b = t.eval_extended(8.0 + 1e-12).unwrap();
        assert!((a.u - b.u).abs() < 1e-15);
        assert!((a.e - b.e).abs() < 1e-12 && (a.f - b.f).abs() < 1e-14);
    }

    #[test]
    fn values_on_extended_grid() {
        let t = table();
        let g = t.grid.extended_to(14.0);
        let vals = t.values_on(&g).unwrap();
        assert_eq!(vals.len(), g.count());
        for &i in &[0, 1500, 3600, 3601, 4000, g.count() - 1] {
            let want = t.eval_extended(g.x(i)).unwrap();
            let got = vals[i];
            assert!((got.e - want.e).abs() < 1e-13 && (got.f - want.f).abs() < 1e-15, "i = {i}");
            assert!((got.u - want.u).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(solve_hastings_mcleod(-5.0, 8.0, 0.005, 1e-11).is_err());
        assert!(solve_hastings_mcleod(-10.0, 8.0, 0.05, 1e-11).is_err());
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        table().write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("x,u,u_prime,v,E,F\n"));
        assert_eq!(s.lines().count(), 3602);
    }
}
