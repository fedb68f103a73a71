//! Thin layer over `dashu_float` binary floats.

use dashu_base::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

pub(crate) type Mp = FBig<HalfEven, 2>;

/// Exact conversion of `x`, then widened to `bits` of working precision.
pub(crate) fn lift(x: f64, bits: usize) -> Mp {
    Mp::try_from(x).expect("finite input").with_precision(bits).value()
}

pub(crate) fn zero(bits: usize) -> Mp {
    lift(0.0, bits)
}

pub(crate) fn one(bits: usize) -> Mp {
    lift(1.0, bits)
}

pub(crate) fn to_f64(x: &Mp) -> f64 {
    x.to_f64().value()
}

pub(crate) fn sqrt(x: &Mp) -> Mp {
    x.sqrt()
}

pub(crate) fn is_positive(x: &Mp) -> bool {
    *x > Mp::ZERO
}

#[cfg(test)]
pub(crate) fn abs(x: &Mp) -> Mp {
    if *x < Mp::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Working precision for a Toeplitz computation whose symbol spans
/// `log2_range` binary orders of magnitude, plus `extra` bits.
pub(crate) fn working_bits(log2_range: f64, extra: f64) -> usize {
    let raw = 128.0 + log2_range.max(0.0) + extra.max(0.0);
    (raw / 64.0).ceil() as usize * 64
}
