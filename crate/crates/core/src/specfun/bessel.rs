use crate::{Error, Result};

/// Exponentially scaled modified Bessel functions e^{-z} I_k(z) for
/// k = 0..=n_max, by Miller's backward recurrence normalised with
/// I_0 + 2 Σ_{k≥1} I_k = e^z.
pub fn bessel_i_scaled(n_max: usize, z: f64) -> Result<Vec<f64>> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("bessel argument must be positive and finite, got {z}")));
    }
    let start = n_max.max(z.ceil() as usize) + 50 + (50.0 * z).sqrt().ceil() as usize;
    let mut out = vec![0.0; n_max + 1];
    let mut above = 0.0_f64;
    let mut here = 1e-280_f64;
    let mut norm = 0.0_f64;
    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = here;
        }
        norm += 2.0 * here;
        let below = above + 2.0 * k as f64 / z * here;
        above = here;
        here = below;
        if here.abs() > 1e250 {
            let s = 1e-250;
            here *= s;
            above *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = here;
    norm += here;
    for v in out.iter_mut() {
        *v /= norm;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // e^{-2} I_k(2) from a 50-digit evaluation
    const AT_TWO: [f64; 9] = [
        0.308_508_322_553_671_04,
        0.215_269_289_248_937_66,
        0.093_239_033_304_733_38,
        0.028_791_222_639_470_898,
        0.006_865_365_386_320_685,
        0.001_329_761_094_188_157_8,
        2.165_599_153_798_960_8e-4,
        3.040_160_190_878_134_8e-5,
        3.748_702_018_426_641e-6,
    ];

    #[test]
    fn matches_reference_at_two() {
        let v = bessel_i_scaled(8, 2.0).unwrap();
        for (k, (&got, &want)) in v.iter().zip(AT_TWO.iter()).enumerate() {
            assert!((got - want).abs() < 1e-14 * want, "k = {k}: {got:e} vs {want:e}");
        }
    }

    #[test]
    fn power_series_agreement() {
        // I_k(z) = Σ_m (z/2)^{2m+k} / (m! (m+k)!)
        for &z in &[0.3, 5.0, 24.0] {
            let v = bessel_i_scaled(12, z).unwrap();
            for k in 0..=12usize {
                let mut term = (z / 2.0_f64).powi(k as i32) / (1..=k).map(|j| j as f64).product::<f64>();
                let mut sum = 0.0;
                for m in 0..400usize {
                    sum += term;
                    term *= (z / 2.0).powi(2) / ((m + 1) as f64 * (m + k + 1) as f64);
                }
                let want = sum * (-z).exp();
                assert!((v[k] - want).abs() < 1e-12 * want, "z = {z}, k = {k}");
            }
        }
    }

    #[test]
    fn large_argument_is_finite_and_normalised() {
        let v = bessel_i_scaled(400, 300.0).unwrap();
        assert!(v.iter().all(|x| x.is_finite() && *x >= 0.0));
        let total = v[0] + 2.0 * v[1..].iter().sum::<f64>();
        assert!((total - 1.0).abs() < 1e-12);
        // leading asymptotic e^{-z} I_0(z) ≈ 1/sqrt(2πz) (1 + 1/(8z))
        let lead =
            1.0 / (2.0 * std::f64::consts::PI * 300.0).sqrt() * (1.0 + 1.0 / 2400.0 + 9.0 / (2.0 * 2400.0_f64.powi(2)));
        assert!((v[0] - lead).abs() < 1e-8 * lead);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(bessel_i_scaled(3, 0.0).is_err());
        assert!(bessel_i_scaled(3, -1.0).is_err());
        assert!(bessel_i_scaled(3, f64::NAN).is_err());
    }
}
