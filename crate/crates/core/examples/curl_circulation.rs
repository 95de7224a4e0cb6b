//! Surface curl of (−y, x, 0) on the plane and the circulation identity on the disk.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use extcalc::differential::{curl, EngineConfig, FdMode};
use extcalc::integration::{circulation_residual, QuadratureSpec};
use extcalc::registry;
use extcalc::samples::rotation_field;

fn main() -> extcalc::Result<()> {
    let u = rotation_field([0.0, 0.0, 1.0], 1.0)?;
    for mode in [FdMode::Fd2, FdMode::Fd4, FdMode::Analytic] {
        let disk = registry::build("plane_disk", &BTreeMap::new(), EngineConfig::new(mode), QuadratureSpec::default())?;
        let c = curl(&disk.geometry, &u)?;
        let value = c.eval_scalar(&[0.3, -0.2, 0.0], 0.0)?;
        let circ = circulation_residual(&disk.atlas, &u)?;
        println!(
            "{mode:>8}: curl = {value:.14}  ∮ u·τ = {:.12}  ∫ curl = {:.12}  (2π = {:.12})",
            circ.lhs.value(),
            circ.rhs.value(),
            2.0 * PI
        );
    }
    Ok(())
}
