//! Extrinsic and covariant Laplacians on the unit sphere and a manufactured weak form.

use std::collections::BTreeMap;

use extcalc::differential::{laplacian_covariant, laplacian_extrinsic, project, EngineConfig, FdMode};
use extcalc::integration::{weak_form_eval, QuadratureSpec};
use extcalc::registry;
use extcalc::samples::{random_quadratic_field, rotation_field};
use extcalc::TensorField;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extcalc::Result<()> {
    let s = registry::build("sphere", &BTreeMap::new(), EngineConfig::new(FdMode::Fd2), QuadratureSpec::default())?;
    let g = &s.geometry;
    let x = [0.48, 0.6, 0.64];

    let lz = laplacian_extrinsic(g, &TensorField::coordinate(3, 2)?)?;
    println!("Δ_M z at {x:?} = {:.9}  (−2z = {:.9})", lz.eval_scalar(&x, 0.0)?, -2.0 * x[2]);

    let u = rotation_field([0.0, 0.0, 1.0], 1.0)?;
    let lu = laplacian_covariant(g, &u)?.eval_vector(&x, 0.0)?;
    println!("Δ^cov (e_z × x) = {lu:.9?}  (−(e_z × x) = [0.6, -0.48, 0])");

    let f = laplacian_covariant(g, &u)?.scale(-1.0)?;
    let test = project(g, &random_quadratic_field(&mut ChaCha8Rng::seed_from_u64(2), 3, 1, 1.0)?)?;
    let wf = weak_form_eval(&s.atlas, &u, &test, &f, None)?;
    println!("a^cov(T, S) = {:.12}  ℓ(S) = {:.12}  |diff| = {:.1e}", wf.bilinear, wf.linear, (wf.bilinear - wf.linear).abs());
    Ok(())
}
