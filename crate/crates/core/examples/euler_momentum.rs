//! Rigid rotation as a steady Euler flow: residuals, momentum and force balance.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use extcalc::applications::{euler_residual, extrinsic_momentum, force_balance_residual, EulerState};
use extcalc::differential::{EngineConfig, FdMode};
use extcalc::integration::QuadratureSpec;
use extcalc::registry;
use extcalc::samples::rotation_field;
use extcalc::TensorField;

fn main() -> extcalc::Result<()> {
    let omega = 1.0;
    let state = EulerState::new(
        rotation_field([0.0, 0.0, 1.0], omega)?,
        TensorField::static_scalar(3, move |x| 0.5 * omega * omega * (x[0] * x[0] + x[1] * x[1]))?,
        1.0,
    )?;
    let engine = EngineConfig::new(FdMode::Fd2);
    let sphere = registry::build("sphere", &BTreeMap::new(), engine.clone(), QuadratureSpec::default())?;
    let r = euler_residual(&sphere.atlas, &state, 0.0, 64)?;
    println!("sphere: momentum {:.1e}  div {:.1e}  divergence form {:.1e}", r.momentum, r.divergence, r.divergence_form);
    println!("sphere: |J| = {:.1e}", extrinsic_momentum(&sphere.atlas, &state)?.norm());

    let cap = registry::build("hemisphere", &BTreeMap::new(), engine, QuadratureSpec::default())?;
    let fb = force_balance_residual(&cap.atlas, &state)?;
    println!("hemisphere (exact z-components: π/2, −π, π/2 = {:.9}, {:.9}, {:.9})", PI / 2.0, -PI, PI / 2.0);
    println!("  ∫ pκ            = {:.9?}", fb.pressure_curvature.as_slice());
    println!("  ∫_∂M p t        = {:.9?}", fb.boundary_pressure.as_slice());
    println!("  centripetal     = {:.9?}", fb.centripetal.as_slice());
    println!("  sum             = {:.1e}", fb.sum.norm());
    Ok(())
}
