use std::f64::consts::{FRAC_PI_4, PI};

use super::dd::DoubleDouble;

/// Ai(0) and -Ai'(0) split into double-double.
const AI0: DoubleDouble = DoubleDouble::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const MINUS_AIP0: DoubleDouble = DoubleDouble::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// Beyond this |x| the asymptotic expansions are accurate to better than 1e-13.
const SERIES_LIMIT: f64 = 8.0;

/// Airy function Ai(x) and its derivative Ai'(x).
///
/// Maclaurin series summed in double-double for |x| <= 8 (the two series
/// cancel by up to thirteen digits near x = 8), asymptotic expansions
/// beyond.
pub fn airy_ai(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        asymptotic_right(x)
    } else {
        asymptotic_left(-x)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = DoubleDouble::product(x, x).mul_f64(x);
    let x2 = DoubleDouble::product(x, x);
    let xd = DoubleDouble::from_f64(x);

    // f = sum a_k x^{3k},   g = sum c_k x^{3k+1}
    // f' = sum b_k x^{3k-1}, g' = sum d_k x^{3k}
    let mut f_term = DoubleDouble::ONE;
    let mut g_term = xd;
    let mut fp_term = x2.mul_f64(0.5);
    let mut gp_term = DoubleDouble::ONE;
    let mut f = f_term;
    let mut g = g_term;
    let mut fp = fp_term;
    let mut gp = gp_term;

    let mut scale = 1.0_f64;
    for k in 1..400 {
        let kf = k as f64;
        f_term = (f_term * x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        g_term = (g_term * x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        gp_term = (gp_term * x3).div_f64((3.0 * kf) * (3.0 * kf - 2.0));
        if k >= 2 {
            fp_term = (fp_term * x3).div_f64((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp = fp + fp_term;
        }
        f = f + f_term;
        g = g + g_term;
        gp = gp + gp_term;

        let mag = f_term.hi.abs().max(g_term.hi.abs()).max(fp_term.hi.abs()).max(gp_term.hi.abs());
        scale = scale.max(mag);
        let shrinking = x3.hi.abs() < 9.0 * kf * kf;
        if shrinking && mag <= 1e-34 * scale {
            break;
        }
    }
    let ai = AI0 * f - MINUS_AIP0 * g;
    let aip = AI0 * fp - MINUS_AIP0 * gp;
    (ai.to_f64(), aip.to_f64())
}

/// Coefficients u_k, v_k of the Airy asymptotic expansions, in order,
/// until they stop helping at the given ζ.
fn asymptotic_sums(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut us = vec![1.0];
    let mut vs = vec![1.0];
    let mut u = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let term = (u / zeta.powi(k)).abs().max((v / zeta.powi(k)).abs());
        if term > last || term < 1e-18 {
            if term < 1e-18 {
                us.push(u);
                vs.push(v);
            }
            break;
        }
        last = term;
        us.push(u);
        vs.push(v);
    }
    (us, vs)
}

fn asymptotic_right(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (us, vs) = asymptotic_sums(zeta);
    let mut su = 0.0;
    let mut sv = 0.0;
    // sum from the small end for accuracy
    for k in (0..us.len()).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let zk = zeta.powi(k as i32);
        su += sign * us[k] / zk;
        sv += sign * vs[k] / zk;
    }
    let pref = (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25));
    (pref * su, -x.sqrt() * pref * sv)
}

fn asymptotic_left(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (us, vs) = asymptotic_sums(zeta);
    let (mut p, mut q, mut r, mut s) = (0.0, 0.0, 0.0, 0.0);
    for k in (0..us.len()).rev() {
        let zk = zeta.powi(k as i32);
        let m = k / 2;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * us[k] / zk;
            r += sign * vs[k] / zk;
        } else {
            q += sign * us[k] / zk;
            s += sign * vs[k] / zk;
        }
    }
    let (sn, cs) = (zeta + FRAC_PI_4).sin_cos();
    let rp = PI.sqrt();
    let ai = (sn * p - cs * q) / (rp * z.powf(0.25));
    let aip = -z.powf(0.25) / rp * (cs * r + sn * s);
    (ai, aip)
}

/// ln Ai(x) for x > 0, finite well past the underflow of Ai itself.
pub fn airy_ai_ln(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        return airy_ai(x).0.ln();
    }
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (us, _) = asymptotic_sums(zeta);
    let mut su = 0.0;
    for k in (0..us.len()).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * us[k] / zeta.powi(k as i32);
    }
    -zeta - (2.0 * PI.sqrt() * x.powf(0.25)).ln() + su.ln()
}

// 5-point Gauss–Legendre on [-1, 1]
const GL_NODES: [f64; 5] =
    [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

fn gauss_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for (n, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            s += w * f(c + 0.5 * h * n);
        }
        total += 0.5 * h * s;
    }
    total
}

/// ∫_x^∞ Ai(s) ds.
pub fn airy_ai_integral(x: f64) -> f64 {
    if x < 0.0 {
        let head = gauss_panels(|s| airy_ai(s).0, x, 0.0, ((-x) / 0.05).ceil() as usize);
        return 1.0 / 3.0 + head;
    }
    // integrand decays like exp(-sqrt(x) s); cover ~80 e-folds
    let width = 80.0 / x.sqrt().max(1.0) + 2.0;
    let panels = (width / 0.05).ceil() as usize;
    gauss_panels(|s| airy_ai(s).0, x, x + width, panels)
}

/// ∫_x^∞ Ai(s)² ds = Ai'(x)² − x Ai(x)².
pub fn airy_ai_sq_integral(x: f64) -> f64 {
    let (ai, aip) = airy_ai(x);
    aip * aip - x * ai * ai
}

/// ∫_x^∞ (s − x) Ai(s)² ds = (2x² Ai² − 2x Ai'² − Ai Ai') / 3.
pub fn airy_ai_sq_moment(x: f64) -> f64 {
    let (ai, aip) = airy_ai(x);
    (2.0 * x * x * ai * ai - 2.0 * x * aip * aip - ai * aip) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from a 50-digit evaluation
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-12.0, -0.066_555_175_054_373_13, 1.023_110_453_367_970_7),
        (-10.0, 0.040_241_238_486_443_19, 0.996_265_044_132_790_1),
        (-8.5, -0.330_290_237_630_208_9, -0.032_313_348_284_639_14),
        (-8.0, -0.052_705_050_356_386_2, 0.935_560_938_198_306_6),
        (-6.0, -0.329_145_173_629_823_1, 0.345_935_487_281_342_9),
        (-4.5, 0.292_152_781_055_959_5, -0.523_362_532_315_747_7),
        (-3.0, -0.378_814_293_677_658_1, 0.314_583_769_216_598_8),
        (-1.0, 0.535_560_883_292_352_1, -0.010_160_567_116_645_21),
        (0.5, 0.231_693_606_480_833_5, -0.224_910_532_664_683_9),
        (1.0, 0.135_292_416_312_881_4, -0.159_147_441_296_793_2),
        (2.0, 0.034_924_130_423_274_38, -0.053_090_384_433_653_63),
        (4.5, 3.302_503_235_143_089_8e-4, -7.178_665_675_575_089e-4),
        (6.0, 9.947_694_360_252_89e-6, -2.476_520_039_703_495_5e-5),
        (8.0, 4.692_207_616_099_231_6e-8, -1.341_439_297_906_786_6e-7),
        (8.5, 1.099_700_975_519_550_7e-8, -3.237_725_440_447_602e-8),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
        (12.0, 1.393_184_688_875_360_8e-13, -4.854_736_554_985_308e-13),
    ];

    #[test]
    fn value_at_zero_is_closed_form() {
        let (ai, aip) = airy_ai(0.0);
        assert!((ai - 0.355_028_053_887_817_24).abs() < 1e-16);
        assert!((aip + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn matches_reference_table() {
        for &(x, ai_ref, aip_ref) in REFERENCE {
            let (ai, aip) = airy_ai(x);
            // relative to the local amplitude: for x < 0 the oscillation
            // envelope, for x > 0 the value itself
            let amp = if x < 0.0 { (-x).powf(-0.25) / PI.sqrt() } else { ai_ref.abs() };
            let amp_p = if x < 0.0 { (-x).powf(0.25) / PI.sqrt() } else { aip_ref.abs() };
            assert!((ai - ai_ref).abs() < 1e-12 * amp, "Ai({x}) = {ai:e}, want {ai_ref:e}");
            assert!((aip - aip_ref).abs() < 1e-12 * amp_p, "Ai'({x}) = {aip:e}, want {aip_ref:e}");
        }
    }

    #[test]
    fn matches_leading_asymptotic_at_six() {
        let x: f64 = 6.0;
        let (ai, _) = airy_ai(x);
        let r = ai * 2.0 * PI.sqrt() * x.powf(0.25) * (2.0 / 3.0 * x.powf(1.5)).exp();
        assert!((0.98..=1.0).contains(&r), "{r}");
    }

    #[test]
    fn positive_and_decaying() {
        let (a1, _) = airy_ai(1.0);
        let (a2, _) = airy_ai(2.0);
        assert!(a1 > a2 && a2 > 0.0);
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        let mut x = -5.0;
        while x <= 5.0 {
            let d2 = (airy_ai(x + h).0 - 2.0 * airy_ai(x).0 + airy_ai(x - h).0) / (h * h);
            assert!((d2 - x * airy_ai(x).0).abs() < 1e-6, "x = {x}");
            x += 0.05;
        }
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for &x in &[8.0_f64, -8.0] {
            let s = maclaurin(x);
            let a = if x > 0.0 { asymptotic_right(x) } else { asymptotic_left(-x) };
            let scale = if x > 0.0 { s.0.abs() } else { 1.0 };
            assert!((s.0 - a.0).abs() < 1e-12 * scale, "{x}: {s:?} vs {a:?}");
        }
    }

    #[test]
    fn log_form() {
        for &x in &[0.5, 8.0, 8.5, 12.0] {
            assert!((airy_ai_ln(x) - airy_ai(x).0.ln()).abs() < 1e-12, "x = {x}");
        }
        // ln Ai(100) from a 50-digit evaluation
        assert!((airy_ai_ln(100.0) + 669.083_575_425_309_6).abs() < 1e-9);
    }

    #[test]
    fn integrals() {
        assert!((airy_ai_integral(0.0) - 1.0 / 3.0).abs() < 1e-13);
        // ∫_{-∞}^∞ Ai = 1 is too slowly convergent; check the derivative instead
        let h = 1e-4;
        for &x in &[0.5, 3.0, 9.0] {
            let d = (airy_ai_integral(x + h) - airy_ai_integral(x - h)) / (2.0 * h);
            assert!((d + airy_ai(x).0).abs() < 1e-7 * airy_ai(x).0.abs().max(1e-12), "x = {x}");
        }
        // the closed forms against quadrature
        for &x in &[1.0, 8.0] {
            let q = gauss_panels(|s| airy_ai(s).0.powi(2), x, x + 30.0, 600);
            assert!((q - airy_ai_sq_integral(x)).abs() < 1e-10 * q, "x = {x}");
            let m = gauss_panels(|s| (s - x) * airy_ai(s).0.powi(2), x, x + 30.0, 600);
            assert!((m - airy_ai_sq_moment(x)).abs() < 1e-9 * m, "x = {x}");
        }
    }
}
