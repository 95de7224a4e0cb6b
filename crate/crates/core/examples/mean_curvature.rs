//! Mean curvature vector of spheres and a codimension-two circle in each derivative mode.

use extcalc::differential::{mean_curvature, EngineConfig, FdMode};
use extcalc::geometry::{circle3d, sphere};

fn main() -> extcalc::Result<()> {
    for mode in [FdMode::Fd2, FdMode::Fd4, FdMode::Analytic] {
        for r in [1.0, 2.0] {
            let kappa = mean_curvature(&sphere(r, EngineConfig::new(mode))?)?;
            let x = [0.6 * r, -0.48 * r, 0.64 * r];
            let k = kappa.eval_vector(&x, 0.0)?;
            let exact: Vec<f64> = x.iter().map(|c| 2.0 * c / (r * r)).collect();
            let err = k.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() * r / 2.0;
            println!("{mode:>8} sphere R={r}: κ = {k:.9?}  rel err {err:.1e}");
        }
        let kappa = mean_curvature(&circle3d(1.5, EngineConfig::new(mode))?)?;
        let x = [1.5 * 0.8, 1.5 * 0.6, 0.0];
        let k = kappa.eval_vector(&x, 0.0)?;
        println!("{mode:>8} circle R=1.5: κ = {k:.9?}  (x/R² = [0.533333333, 0.4, 0])");
    }
    Ok(())
}
