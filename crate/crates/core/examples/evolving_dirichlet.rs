//! Expanding sphere: Reynolds transport and the rate of the Dirichlet energy.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use extcalc::applications::{dirichlet_energy, dirichlet_rate, reynolds_residual, EvolvingScenario};
use extcalc::differential::{project, EngineConfig, FdMode};
use extcalc::integration::QuadratureSpec;
use extcalc::registry;
use extcalc::tensor::norm2;
use extcalc::{Tensor, TensorField};

fn main() -> extcalc::Result<()> {
    let c = 0.1;
    let params = BTreeMap::from([("c".to_string(), c), ("t".to_string(), 0.5)]);
    let s = registry::build("expanding_sphere", &params, EngineConfig::new(FdMode::Fd2), QuadratureSpec::default())?;
    let r = 1.0 + c * 0.5;
    let w = TensorField::from_static_fn(3, 1, move |x| {
        let n = norm2(x);
        x.iter().map(|v| c * v / n).collect()
    })?;

    let one = TensorField::constant(Tensor::scalar(3, 1.0)?);
    let sc = EvolvingScenario::new(s.atlas.clone(), w.clone(), one.clone(), 5e-3)?;
    let rey = reynolds_residual(&sc, &one)?;
    println!("d|M|/dt: transport {:.10}  oracle {:.10}  8πRc {:.10}", rey.rhs.value(), rey.lhs.value(), 8.0 * PI * r * c);

    let z = TensorField::coordinate(3, 2)?;
    println!("E[z] = {:.10}  (4πR²/3 = {:.10})", dirichlet_energy(&s.atlas, &z)?, 4.0 * PI * r * r / 3.0);
    let rate = dirichlet_rate(&sc.with_field(z))?;
    println!("dE/dt for z: formula {:.10}  oracle {:.10}  rel {:.1e}", rate.formula, rate.oracle, rate.residual.rel);

    let ezz = TensorField::constant(Tensor::from_matrix(&[vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, 1.0]])?);
    let rate = dirichlet_rate(&sc.with_field(project(&s.geometry, &ezz)?))?;
    println!("dE/dt for ℙ(e_z⊗e_z): formula {:.10}  oracle {:.10}  rel {:.1e}", rate.formula, rate.oracle, rate.residual.rel);
    Ok(())
}
