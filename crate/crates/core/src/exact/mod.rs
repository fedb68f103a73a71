//! Exact finite-size distributions.
//!
//! `P(L(t) ≤ l)` for the Poisson model and `P(X(N) ≤ l)` for the lattice
//! polymer are Toeplitz determinant formulas: a prefactor times
//! `D'_l − α₊α₋ D'_{l−1}`, where `D'_l / D_l` is expressed through the
//! monic orthogonal polynomials of the symbol evaluated at `−α₊`, `−α₋`.
//!
//! The Toeplitz sections are as badly conditioned as the ratio of the
//! largest to the smallest value of the symbol on the circle (`e^{4t}` for
//! the exponential symbol), so all linear algebra runs in binary floating
//! point with a precision chosen from that ratio.

mod cdf;
mod mp;
mod opuc;
mod toeplitz;
mod weight;

pub use cdf::{lpp_cdf_exact, png_cdf_exact, CdfRow, ExactCdf, LPP_N_ENVELOPE, LPP_Q_ENVELOPE, PNG_T_ENVELOPE};
pub use opuc::{dprime_ratio, monic_op_eval, OpEval, LHOPITAL_THRESHOLD};
pub use toeplitz::{toeplitz_logdet, toeplitz_logdet_with, LogdetMethod};
pub use weight::ToeplitzWeight;
