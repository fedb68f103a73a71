//! Special functions and quadrature shared by the rest of the crate.
//!
//! Everything here is a pure function of its arguments.

mod airy;
mod bessel;
pub mod dd;
mod grid;
mod quad;

pub use airy::{airy_ai, airy_ai_integral, airy_ai_ln, airy_ai_sq_integral, airy_ai_sq_moment};
pub use bessel::bessel_i_scaled;
pub use grid::RealGrid;
pub use quad::{integrate_sampled, integrate_sampled_total};

/// Standard normal distribution function Φ(x).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
