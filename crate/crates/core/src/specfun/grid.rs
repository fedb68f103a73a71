use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform grid on `[x_lo, x_hi]`. Abscissae are always computed from the
/// index, never accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    x_lo: f64,
    step: f64,
    count: usize,
}

impl RealGrid {
    pub fn new(x_lo: f64, x_hi: f64, step: f64) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && step.is_finite()) {
            return Err(Error::Contract("grid bounds must be finite".into()));
        }
        if x_lo >= x_hi {
            return Err(Error::Contract(format!("grid needs x_lo < x_hi, got [{x_lo}, {x_hi}]")));
        }
        if step <= 0.0 {
            return Err(Error::Contract(format!("grid step must be positive, got {step}")));
        }
        let intervals = ((x_hi - x_lo) / step).round();
        if intervals < 1.0 {
            return Err(Error::Contract("grid step larger than the interval".into()));
        }
        Ok(Self { x_lo, step, count: intervals as usize + 1 })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    /// Last abscissa, `x_lo + (count - 1) * step`.
    pub fn x_hi(&self) -> f64 {
        self.x(self.count - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.step
    }

    pub fn abscissae(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.x(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi()
    }

    /// Index `i` of the cell `[x_i, x_{i+1}]` holding `x`, and the offset
    /// `x - x_i`. The last knot maps onto the last cell.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !self.contains(x) {
            return None;
        }
        let i = (((x - self.x_lo) / self.step).floor() as usize).min(self.count - 2);
        Some((i, x - self.x(i)))
    }

    /// Same spacing, extended to the right so that it covers `x_hi`.
    pub fn extended_to(&self, x_hi: f64) -> RealGrid {
        if x_hi <= self.x_hi() {
            return *self;
        }
        let intervals = ((x_hi - self.x_lo) / self.step).ceil() as usize;
        RealGrid { x_lo: self.x_lo, step: self.step, count: intervals + 1 }
    }
}
