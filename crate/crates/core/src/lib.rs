//! Limiting distributions, exact finite-size probabilities and Monte Carlo
//! for the polynuclear growth model with two external sources.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Airy, normal CDF, scaled Bessel `I_k`, quadrature of sampled data.
//! * [`painleve`]: the Hastings–McLeod solution of Painlevé II and the
//!   quantities `u, u', v, E, F` built from it.
//! * [`transition`]: the functions `a(x,w)`, `b(x,w)` computed from their
//!   linear ODEs in `x` and in `w`.
//! * [`distributions`]: `F_GUE`, `F_GOE`, `F_GSE`, `F_0`, `G`, `H`, `Φ`, `Φ²`.
//! * [`sampler`]: Poisson point configurations, the geometric lattice polymer
//!   and the discrete exclusion process.
//! * [`exact`]: Toeplitz determinants, orthogonal polynomials on the unit
//!   circle and the finite-size probability formulas.
//! * [`harness`]: Monte Carlo orchestration, scaling maps, KS distances and
//!   comparison reports.

// NaN must fail the range checks, and the numerics read better with indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod distributions;
pub mod error;
pub mod exact;
pub mod harness;
mod ode;
pub mod painleve;
pub mod sampler;
pub mod specfun;
pub mod transition;

pub use error::{Error, Result};
