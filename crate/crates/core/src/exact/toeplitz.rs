use std::fmt;
use std::str::FromStr;

use super::mp::{self, Mp};
use super::weight::ToeplitzWeight;
use crate::{Error, Result};

/// How `log D_l` is computed. Both run at the same adaptive precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogdetMethod {
    /// `LDLᵀ` of the largest section, `O(l³)`.
    #[default]
    Cholesky,
    /// Szegő recursion for the monic orthogonal polynomials, `O(l²)`.
    Levinson,
}

impl fmt::Display for LogdetMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogdetMethod::Cholesky => "cholesky",
            LogdetMethod::Levinson => "levinson",
        })
    }
}

impl FromStr for LogdetMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cholesky" => Ok(LogdetMethod::Cholesky),
            "levinson" => Ok(LogdetMethod::Levinson),
            _ => Err(Error::Parameter(format!("unknown method {s:?}"))),
        }
    }
}

/// `log D_l` for `l = 0..=l_max` with `log D_0 = 0`, by Cholesky.
pub fn toeplitz_logdet(w: &ToeplitzWeight, l_max: usize) -> Result<Vec<f64>> {
    toeplitz_logdet_with(w, l_max, LogdetMethod::Cholesky)
}

pub fn toeplitz_logdet_with(w: &ToeplitzWeight, l_max: usize, method: LogdetMethod) -> Result<Vec<f64>> {
    let bits = mp::working_bits(w.log2_symbol_range(), 0.0);
    let sc = w.scaled(l_max + 1, bits)?;
    let pivots = match method {
        LogdetMethod::Cholesky => Ldl::factor(&sc.c, l_max)?.d,
        LogdetMethod::Levinson => {
            let mut sz = Szego::new(&sc.c);
            let mut norms = Vec::with_capacity(l_max);
            for _ in 0..l_max {
                norms.push(sz.norm().clone());
                if norms.len() < l_max {
                    sz.step()?;
                }
            }
            norms
        }
    };
    let s = mp::to_f64(&sc.log_scale);
    let mut out = Vec::with_capacity(l_max + 1);
    out.push(0.0);
    let mut acc = mp::zero(bits);
    for (k, d) in pivots.iter().enumerate() {
        acc += d.ln();
        out.push((k + 1) as f64 * s + mp::to_f64(&acc));
    }
    Ok(out)
}

/// `T = L D Lᵀ` for the symmetric Toeplitz section `T_{ij} = c_{|i−j|}`,
/// `L` unit lower triangular.
pub(crate) struct Ldl {
    lower: Vec<Vec<Mp>>,
    pub d: Vec<Mp>,
}

impl Ldl {
    pub(crate) fn factor(c: &[Mp], n: usize) -> Result<Self> {
        let mut a: Vec<Vec<Mp>> = (0..n).map(|i| (0..=i).map(|j| c[i - j].clone()).collect()).collect();
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = a[k][k].clone();
            if !mp::is_positive(&pivot) {
                return Err(Error::PrecisionExhausted {
                    l: k + 1,
                    detail: format!("Toeplitz pivot {:e} is not positive", mp::to_f64(&pivot)),
                });
            }
            let col: Vec<Mp> = (k + 1..n).map(|i| a[i][k].clone()).collect();
            for (ii, i) in (k + 1..n).enumerate() {
                let f = &col[ii] / &pivot;
                for (jj, j) in (k + 1..=i).enumerate() {
                    let upd = &f * &col[jj];
                    a[i][j] -= upd;
                }
                a[i][k] = f;
            }
            d.push(pivot);
        }
        Ok(Ldl { lower: a, d })
    }

    /// Solves `T x = b`.
    pub(crate) fn solve(&self, b: &[Mp]) -> Vec<Mp> {
        let n = self.d.len();
        let mut x = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let upd = &self.lower[i][k] * &x[k];
                x[i] -= upd;
            }
        }
        for i in 0..n {
            x[i] = &x[i] / &self.d[i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let upd = &self.lower[k][i] * &x[k];
                x[i] -= upd;
            }
        }
        x
    }
}

/// Monic orthogonal polynomials on the unit circle for the weight with
/// moments `c`, built by `π_{n+1}(z) = z π_n(z) + γ_n π*_n(z)`.
pub(crate) struct Szego<'a> {
    c: &'a [Mp],
    coeffs: Vec<Mp>,
    norm: Mp,
}

impl<'a> Szego<'a> {
    pub(crate) fn new(c: &'a [Mp]) -> Self {
        let bits = c[0].precision();
        Szego { c, coeffs: vec![mp::one(bits)], norm: c[0].clone() }
    }

    pub(crate) fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `⟨π_n, π_n⟩`, equal to `D_{n+1} / D_n`.
    pub(crate) fn norm(&self) -> &Mp {
        &self.norm
    }

    /// Coefficients of `π_n`, constant term first.
    #[cfg(test)]
    pub(crate) fn coefficients(&self) -> &[Mp] {
        &self.coeffs
    }

    /// Advances to `π_{n+1}` and returns `γ_n = π_{n+1}(0)`.
    pub(crate) fn step(&mut self) -> Result<Mp> {
        let n = self.degree();
        let mut acc = mp::zero(self.norm.precision());
        for (k, p) in self.coeffs.iter().enumerate() {
            acc += p * &self.c[k + 1];
        }
        let gamma = -(acc / &self.norm);
        let mut next = Vec::with_capacity(n + 2);
        for k in 0..=n + 1 {
            let shifted = if k >= 1 { self.coeffs[k - 1].clone() } else { mp::zero(gamma.precision()) };
            let reflected = if k <= n { &gamma * &self.coeffs[n - k] } else { mp::zero(gamma.precision()) };
            next.push(shifted + reflected);
        }
        let shrink = mp::one(gamma.precision()) - &gamma * &gamma;
        if !mp::is_positive(&shrink) {
            return Err(Error::PrecisionExhausted {
                l: n + 1,
                detail: format!("reflection coefficient {} is not inside (-1, 1)", mp::to_f64(&gamma)),
            });
        }
        self.norm = &self.norm * &shrink;
        self.coeffs = next;
        Ok(gamma)
    }
}
