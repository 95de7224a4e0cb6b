//! Stokes' formula with curvature term on the hemisphere, and the path FTC on a helix.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use extcalc::differential::{EngineConfig, FdMode};
use extcalc::integration::{path_ftc_residual, stokes_residual, QuadratureSpec};
use extcalc::registry;
use extcalc::samples::random_quadratic_field;
use extcalc::{Tensor, TensorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extcalc::Result<()> {
    let engine = EngineConfig::new(FdMode::Fd2);
    let quad = QuadratureSpec::default();
    let cap = registry::build("hemisphere", &BTreeMap::new(), engine.clone(), quad)?;
    let ez = TensorField::constant(Tensor::covector(&[0.0, 0.0, 1.0])?);
    let st = stokes_residual(&cap.atlas, &ez)?;
    println!("hemisphere, T = e_z");
    println!("  ∫ Div_M T      = {:+.12}", st.interior.value());
    println!("  ∫_∂M T·t       = {:+.12}  (−2π = {:+.12})", st.boundary.value(), -2.0 * PI);
    println!("  ∫ T·κ          = {:+.12}  (+2π = {:+.12})", st.curvature.value(), 2.0 * PI);
    println!("  residual       = {:.1e}", st.residual.abs);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_quadratic_field(&mut rng, 3, 2, 1.0)?;
    println!("hemisphere, random rank-2 T: residual {:.1e}", stokes_residual(&cap.atlas, &f)?.residual.abs);

    let helix = registry::build("helix_segment", &BTreeMap::new(), engine, quad)?;
    for rank in 0..3 {
        let f = random_quadratic_field(&mut rng, 3, rank, 1.0)?;
        println!("helix, rank {rank}: ∫ ∇_M T·w − [T] = {:.1e}", path_ftc_residual(&helix.atlas, &f)?.abs);
    }
    Ok(())
}
