//! Adaptive Dormand–Prince 5(4) integration for small real systems.

use crate::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights are the last row of A; these are the differences to
// the embedded fourth-order weights
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

const MAX_STEPS: usize = 2_000_000;

/// Stateful stepper; the last accepted step size carries over between
/// calls to `advance`, so a long integration can be split at output points.
#[derive(Debug, Clone)]
pub(crate) struct Dp45 {
    pub rtol: f64,
    pub atol: f64,
    h: f64,
}

impl Dp45 {
    pub fn new(rtol: f64, atol: f64, h_init: f64) -> Self {
        Self { rtol, atol, h: h_init.abs() }
    }

    /// Integrates y' = f(t, y) from t0 to t1 (either direction).
    pub fn advance<const N: usize>(
        &mut self,
        mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t1: f64,
    ) -> Result<[f64; N]> {
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        let span = (t1 - t0).abs();
        let mut t = t0;
        let mut y = y0;
        if span == 0.0 {
            return Ok(y);
        }
        let mut k = [[0.0; N]; 7];
        k[0] = f(t, &y);
        let mut steps = 0;
        while (t1 - t) * dir > 0.0 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::SolverFailure { iterations: steps, residual: (t1 - t).abs() });
            }
            let remaining = (t1 - t).abs();
            let mut h = self.h.min(remaining);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = h * dir;
            for s in 1..7 {
                let mut ys = y;
                for (j, ks) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += hs * a * ks[i];
                        }
                    }
                }
                k[s] = f(t + C[s] * hs, &ys);
            }
            let mut y_new = y;
            for i in 0..N {
                let mut acc = 0.0;
                for s in 0..6 {
                    acc += A[6][s] * k[s][i];
                }
                y_new[i] += hs * acc;
            }
            let mut err = 0.0_f64;
            for i in 0..N {
                let mut e = 0.0;
                for s in 0..7 {
                    e += E[s] * k[s][i];
                }
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((hs * e).abs() / scale);
            }
            if !err.is_finite() {
                self.h = h * 0.1;
                if self.h < 1e-14 * span.max(1.0) {
                    return Err(Error::SolverFailure { iterations: steps, residual: f64::NAN });
                }
                continue;
            }
            if err <= 1.0 {
                t = if last { t1 } else { t + hs };
                y = y_new;
                // first-same-as-last: stage 7 is the derivative at the new point
                k[0] = k[6];
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || grow < 1.0 {
                    self.h = h * grow;
                }
            } else {
                self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if self.h < 1e-14 * span.max(1.0) {
                    return Err(Error::SolverFailure { iterations: steps, residual: err });
                }
            }
        }
        Ok(y)
    }
}
