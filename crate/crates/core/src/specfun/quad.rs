use super::RealGrid;
use crate::{Error, Result};

/// Integral of f over each cell [x_i, x_{i+1}] from a cubic through four
/// neighbouring samples (one-sided at the ends).
fn cell_integrals(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    match n {
        2 => vec![0.5 * h * (f[0] + f[1])],
        3 => vec![h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]), h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2])],
        _ => (0..n - 1)
            .map(|i| {
                if i == 0 {
                    h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
                } else if i == n - 2 {
                    h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4])
                } else {
                    h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2])
                }
            })
            .collect(),
    }
}

fn check(grid: &RealGrid, values: &[f64]) -> Result<()> {
    if values.len() != grid.count() {
        return Err(Error::Contract(format!("{} samples for a grid of {} points", values.len(), grid.count())));
    }
    if grid.count() < 2 {
        return Err(Error::Contract("integration needs at least two grid points".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite sample at index {i}")));
    }
    Ok(())
}

/// Running integral from the right: entry i is ∫_{x_i}^{x_hi} f.
///
/// Fourth-order accurate for smooth f.
pub fn integrate_sampled(grid: &RealGrid, values: &[f64]) -> Result<Vec<f64>> {
    check(grid, values)?;
    let cells = cell_integrals(grid.step(), values);
    let mut out = vec![0.0; values.len()];
    let mut acc = 0.0;
    for i in (0..cells.len()).rev() {
        acc += cells[i];
        out[i] = acc;
    }
    Ok(out)
}

/// ∫_{x_lo}^{x_hi} f over the whole grid.
pub fn integrate_sampled_total(grid: &RealGrid, values: &[f64]) -> Result<f64> {
    check(grid, values)?;
    Ok(cell_integrals(grid.step(), values).iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let g = RealGrid::new(-1.0, 2.0, 0.25).unwrap();
        let p = |x: f64| 2.0 * x * x * x - x * x + 3.0 * x - 1.0;
        let anti = |x: f64| 0.5 * x.powi(4) - x.powi(3) / 3.0 + 1.5 * x * x - x;
        let vals: Vec<f64> = g.abscissae().iter().map(|&x| p(x)).collect();
        let run = integrate_sampled(&g, &vals).unwrap();
        for (i, r) in run.iter().enumerate() {
            let want = anti(2.0) - anti(g.x(i));
            assert!((r - want).abs() < 1e-12, "i = {i}");
        }
        assert_eq!(run[run.len() - 1], 0.0);
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |h: f64| {
            let g = RealGrid::new(0.0, 3.0, h).unwrap();
            let vals: Vec<f64> = g.abscissae().iter().map(|&x| x.sin()).collect();
            (integrate_sampled_total(&g, &vals).unwrap() - (1.0 - 3.0_f64.cos())).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn small_grids() {
        let g2 = RealGrid::new(0.0, 1.0, 1.0).unwrap();
        assert!((integrate_sampled_total(&g2, &[1.0, 3.0]).unwrap() - 2.0).abs() < 1e-15);
        let g3 = RealGrid::new(0.0, 2.0, 1.0).unwrap();
        let run = integrate_sampled(&g3, &[0.0, 1.0, 4.0]).unwrap();
        assert!((run[0] - 8.0 / 3.0).abs() < 1e-14);
        assert!((run[1] - 7.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let g = RealGrid::new(0.0, 1.0, 0.5).unwrap();
        assert!(integrate_sampled(&g, &[1.0, 2.0]).is_err());
        assert!(integrate_sampled(&g, &[1.0, f64::NAN, 2.0]).is_err());
    }
}
