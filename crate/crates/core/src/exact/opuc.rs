use serde::{Deserialize, Serialize};

use super::mp::{self, Mp};
use super::toeplitz::Ldl;
use super::weight::ToeplitzWeight;
use crate::{Error, Result};

/// Below this distance of `α₊α₋` from 1 the ratio uses its limiting form.
pub const LHOPITAL_THRESHOLD: f64 = 1e-8;

/// The monic polynomial `π_l` of a weight, its derivative and its reversal
/// `π*_l(z) = z^l π_l(1/z)`, all at one real point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpEval {
    pub l: usize,
    pub z: f64,
    pub pi: f64,
    pub pi_prime: f64,
    pub pi_star: f64,
}

/// Values at one point, kept in working precision.
#[derive(Clone)]
pub(crate) struct PointValues {
    pub pi: Mp,
    pub pi_prime: Mp,
    pub pi_star: Mp,
    pub pi_star_prime: Mp,
}

impl PointValues {
    fn from_coefficients(a: &[Mp], z: &Mp) -> Self {
        let bits = z.precision();
        // π and π' by a Horner pair, π* and π*' on the reversed coefficients
        let horner = |coeffs: &mut dyn Iterator<Item = &Mp>| {
            let mut p = mp::zero(bits);
            let mut dp = mp::zero(bits);
            for c in coeffs {
                dp = &dp * z + &p;
                p = &p * z + c;
            }
            (p, dp)
        };
        let (pi, pi_prime) = horner(&mut a.iter().rev());
        let (pi_star, pi_star_prime) = horner(&mut a.iter());
        PointValues { pi, pi_prime, pi_star, pi_star_prime }
    }

    /// Values of `π_0 = π*_0 = 1`.
    pub(crate) fn degree_zero(bits: usize) -> Self {
        PointValues {
            pi: mp::one(bits),
            pi_prime: mp::zero(bits),
            pi_star: mp::one(bits),
            pi_star_prime: mp::zero(bits),
        }
    }

    /// Applies `π_{n+1} = z π_n + γ π*_n`, `π*_{n+1} = π*_n + γ z π_n`.
    pub(crate) fn advance(&mut self, z: &Mp, gamma: &Mp) {
        let zpi = z * &self.pi;
        let d_zpi = &self.pi + &(z * &self.pi_prime);
        let pi = &zpi + &(gamma * &self.pi_star);
        let pi_prime = &d_zpi + &(gamma * &self.pi_star_prime);
        let pi_star = &self.pi_star + &(gamma * &zpi);
        let pi_star_prime = &self.pi_star_prime + &(gamma * &d_zpi);
        *self = PointValues { pi, pi_prime, pi_star, pi_star_prime };
    }
}

/// Points at which `π_l` must be known for the `D'_l / D_l` ratio.
pub(crate) fn ratio_points(alpha_plus: f64, alpha_minus: f64) -> (f64, f64, bool) {
    if (alpha_plus * alpha_minus - 1.0).abs() < LHOPITAL_THRESHOLD {
        (-alpha_plus, -1.0 / alpha_plus, true)
    } else {
        (-alpha_plus, -alpha_minus, false)
    }
}

/// `D'_l / D_l` from the polynomial values at the two points chosen by
/// [`ratio_points`].
pub(crate) fn ratio_from(
    l: usize,
    alpha_plus: f64,
    alpha_minus: f64,
    at1: &PointValues,
    at2: &PointValues,
    limit: bool,
) -> Mp {
    let bits = at1.pi.precision();
    if limit {
        let a = mp::lift(alpha_plus, bits);
        let inv_a = mp::one(bits) / &a;
        let first = mp::lift(1.0 - l as f64, bits) * &at1.pi * &at2.pi;
        first - &a * &at1.pi_prime * &at2.pi - &inv_a * &at1.pi * &at2.pi_prime
    } else {
        let ap = mp::lift(alpha_plus, bits);
        let am = mp::lift(alpha_minus, bits);
        let prod = &ap * &am;
        let num = &at1.pi_star * &at2.pi_star - &prod * &at1.pi * &at2.pi;
        num / (mp::one(bits) - prod)
    }
}

fn bits_for(w: &ToeplitzWeight, l: usize, zs: &[f64]) -> usize {
    let grow = zs.iter().map(|z| z.abs().max(1.0).log2()).fold(0.0, f64::max);
    mp::working_bits(w.log2_symbol_range(), 2.0 * l as f64 * grow + 64.0)
}

/// Coefficients `a_0 … a_l` of `π_l` (with `a_l = 1`) from the `l × l`
/// system `Σ_k a_k ĉ_{m−k} = −ĉ_{m−l}`, `m < l`.
pub(crate) fn monic_coefficients(c: &[Mp], l: usize) -> Result<Vec<Mp>> {
    let bits = c[0].precision();
    if l == 0 {
        return Ok(vec![mp::one(bits)]);
    }
    let ldl = Ldl::factor(c, l)?;
    let rhs: Vec<Mp> = (0..l).map(|m| -c[l - m].clone()).collect();
    let mut a = ldl.solve(&rhs);
    a.push(mp::one(bits));
    Ok(a)
}

pub fn monic_op_eval(w: &ToeplitzWeight, l: usize, z: f64) -> Result<OpEval> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("evaluation point must be finite, got {z}")));
    }
    let bits = bits_for(w, l, &[z]);
    let sc = w.scaled(l, bits)?;
    let a = monic_coefficients(&sc.c, l)?;
    let v = PointValues::from_coefficients(&a, &mp::lift(z, bits));
    Ok(OpEval { l, z, pi: mp::to_f64(&v.pi), pi_prime: mp::to_f64(&v.pi_prime), pi_star: mp::to_f64(&v.pi_star) })
}

/// `D'_l / D_l`: the ratio of the determinant with the extra factor
/// `(1 + α₊z)(1 + α₋/z)` in the symbol to the plain one.
pub fn dprime_ratio(w: &ToeplitzWeight, l: usize, alpha_plus: f64, alpha_minus: f64) -> Result<f64> {
    for (name, a) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Parameter(format!("{name} must be nonnegative, got {a}")));
        }
    }
    let (z1, z2, limit) = ratio_points(alpha_plus, alpha_minus);
    let bits = bits_for(w, l, &[z1, z2]);
    let sc = w.scaled(l, bits)?;
    let a = monic_coefficients(&sc.c, l)?;
    let at1 = PointValues::from_coefficients(&a, &mp::lift(z1, bits));
    let at2 = PointValues::from_coefficients(&a, &mp::lift(z2, bits));
    Ok(mp::to_f64(&ratio_from(l, alpha_plus, alpha_minus, &at1, &at2, limit)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::toeplitz::Szego;
    use crate::specfun::bessel_i_scaled;

    #[test]
    fn constant_weight_gives_monomials() {
        let w = ToeplitzWeight::exponential(1e-12).unwrap();
        for l in 0..6 {
            for z in [-1.5, -0.3, 0.0, 0.7, 2.0] {
                let e = monic_op_eval(&w, l, z).unwrap();
                let zl = if l == 0 { 1.0 } else { z.powi(l as i32) };
                assert!((e.pi - zl).abs() < 1e-10, "l={l} z={z}");
                assert!((e.pi_star - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degree_one_closed_form() {
        let w = ToeplitzWeight::exponential(1.0).unwrap();
        let i = bessel_i_scaled(1, 2.0).unwrap();
        let r = i[1] / i[0];
        for alpha in [0.0, 0.4, 1.7] {
            let e = monic_op_eval(&w, 1, -alpha).unwrap();
            assert!((e.pi - (-alpha - r)).abs() < 1e-15);
            assert!((e.pi_star - (1.0 + alpha * r)).abs() < 1e-15);
            assert_eq!(e.pi_prime, 1.0);
        }
        assert_eq!(monic_op_eval(&w, 3, 0.0).unwrap().pi_star, 1.0);
    }

    #[test]
    fn ratio_trivial_and_small_cases() {
        let w = ToeplitzWeight::exponential(1.0).unwrap();
        for l in 0..8 {
            assert!((dprime_ratio(&w, l, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        }
        // l = 1: D'_1 = (1 + α₊α₋) c_0 + (α₊ + α₋) c_1
        let i = bessel_i_scaled(1, 2.0).unwrap();
        let (a, b) = (0.3, 0.3);
        let want = ((1.0 + a * b) * i[0] + (a + b) * i[1]) / i[0];
        assert!((dprime_ratio(&w, 1, a, b).unwrap() - want).abs() < 1e-12);
        // same closed form also holds on the critical line α₊α₋ = 1
        let (a, b) = (2.0, 0.5);
        let want = ((1.0 + a * b) * i[0] + (a + b) * i[1]) / i[0];
        assert!((dprime_ratio(&w, 1, a, b).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn ratio_is_a_determinant_ratio() {
        // D'_l from the Toeplitz matrix of the modified symbol
        // (1 + α₊z)(1 + α₋/z) e^{t(z+1/z)}, assembled in f64
        let (t, ap, am) = (1.3, 0.6, 1.4);
        let i = bessel_i_scaled(12, 2.0 * t).unwrap();
        let c = |j: i64| i[j.unsigned_abs() as usize];
        let cp = |j: i64| (1.0 + ap * am) * c(j) + ap * c(j - 1) + am * c(j + 1);
        let det = |f: &dyn Fn(i64) -> f64, l: usize| {
            let mut a: Vec<Vec<f64>> = (0..l).map(|r| (0..l).map(|s| f(r as i64 - s as i64)).collect()).collect();
            let mut d = 1.0;
            for k in 0..l {
                d *= a[k][k];
                for r in k + 1..l {
                    let f = a[r][k] / a[k][k];
                    for s in k..l {
                        a[r][s] -= f * a[k][s];
                    }
                }
            }
            d
        };
        let w = ToeplitzWeight::exponential(t).unwrap();
        for l in 1..=6 {
            let want = det(&cp, l) / det(&c, l);
            let got = dprime_ratio(&w, l, ap, am).unwrap();
            assert!((got / want - 1.0).abs() < 1e-10, "l={l}: {got} vs {want}");
        }
    }

    #[test]
    fn limit_branch_matches_numerical_limit() {
        let w = ToeplitzWeight::exponential(1.0).unwrap();
        let lim = dprime_ratio(&w, 3, 2.0, 0.5).unwrap();
        let h = 1e-6;
        let up = dprime_ratio(&w, 3, 2.0, 0.5 * (1.0 + h)).unwrap();
        let dn = dprime_ratio(&w, 3, 2.0, 0.5 * (1.0 - h)).unwrap();
        let richardson = 0.5 * (up + dn);
        assert!((lim / richardson - 1.0).abs() < 1e-6, "{lim} vs {richardson}");
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let t: f64 = 0.8;
        let w = ToeplitzWeight::exponential(t).unwrap();
        let sc = w.scaled(6, 192).unwrap();
        for l in 1..=6 {
            let a: Vec<f64> = monic_coefficients(&sc.c, l).unwrap().iter().map(mp::to_f64).collect();
            // linear-system residual
            for m in 0..l {
                let res: f64 = (0..=l).map(|k| a[k] * mp::to_f64(&sc.c[m.abs_diff(k)])).sum();
                assert!(res.abs() < 1e-10);
            }
            // ∫ π_l(e^{iθ}) e^{-imθ} w(θ) dθ/2π by a 512-point trapezoid sum
            let n = 512;
            for m in 0..l {
                let (mut re, mut im) = (0.0, 0.0);
                for k in 0..n {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    let wt = (2.0 * t * (th.cos() - 1.0)).exp();
                    for (j, aj) in a.iter().enumerate() {
                        let ph = (j as f64 - m as f64) * th;
                        re += aj * ph.cos() * wt;
                        im += aj * ph.sin() * wt;
                    }
                }
                assert!(re.abs() / (n as f64) < 1e-10 && im.abs() / (n as f64) < 1e-10, "l={l} m={m}");
            }
        }
    }

    #[test]
    fn szego_recursion_matches_linear_solve() {
        let w = ToeplitzWeight::Geometric { n: 9, q: 0.3 };
        let sc = w.scaled(15, 256).unwrap();
        let mut sz = Szego::new(&sc.c);
        for l in 0..=14 {
            let direct = monic_coefficients(&sc.c, l).unwrap();
            for (x, y) in direct.iter().zip(sz.coefficients()) {
                assert!(mp::to_f64(&mp::abs(&(x - y))) < 1e-50);
            }
            let z = mp::lift(-0.7, 256);
            let mut tracked = PointValues::degree_zero(256);
            let mut rebuilt = Szego::new(&sc.c);
            for _ in 0..l {
                let g = rebuilt.step().unwrap();
                tracked.advance(&z, &g);
            }
            let direct_v = PointValues::from_coefficients(&direct, &z);
            for (x, y) in [
                (&tracked.pi, &direct_v.pi),
                (&tracked.pi_prime, &direct_v.pi_prime),
                (&tracked.pi_star, &direct_v.pi_star),
                (&tracked.pi_star_prime, &direct_v.pi_star_prime),
            ] {
                assert!(mp::to_f64(&mp::abs(&(x - y))) < 1e-50, "l={l}");
            }
            sz.step().unwrap();
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let w = ToeplitzWeight::exponential(1.0).unwrap();
        assert!(monic_op_eval(&w, 2, f64::NAN).is_err());
        assert!(dprime_ratio(&w, 2, -1.0, 0.0).is_err());
    }
}
