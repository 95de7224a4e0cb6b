//! Stress force and torque on the hemisphere, and the pointwise equilibrium diagnostics.

use std::collections::BTreeMap;

use extcalc::applications::{generator_identity_residual, pointwise_stress_checks, stress_force, torque_equivalence_residual, StressState};
use extcalc::differential::{EngineConfig, FdMode};
use extcalc::integration::QuadratureSpec;
use extcalc::registry;
use extcalc::samples::random_quadratic_field;
use extcalc::tensor::norm2;
use extcalc::Tensor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extcalc::Result<()> {
    let cap = registry::build("hemisphere", &BTreeMap::new(), EngineConfig::new(FdMode::Fd2), QuadratureSpec::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sigma = random_quadratic_field(&mut rng, 3, 2, 1.0)?;
    let state = StressState::new(sigma.clone())?;
    println!("force F = {:.6?}", stress_force(&cap.atlas, &state)?.as_slice());
    for (k, r) in torque_equivalence_residual(&cap.atlas, &state)?.iter().enumerate() {
        println!("torque K={k}: {:+.9} vs {:+.9}  residual {:.1e}", r.lhs.value(), r.rhs.value(), r.abs);
    }
    for (k, r) in generator_identity_residual(&cap.atlas, &sigma)?.iter().enumerate() {
        println!("generator identity K={k}: residual {:.1e}", r.abs);
    }

    let x = [0.0, 0.6, 0.8];
    let frame = cap.geometry.frame_at(&x, 0.0)?;
    let pw = frame.project_vector(&[0.3, -1.0, 0.4]);
    let sigma = Tensor::covector(&pw)?.outer(&Tensor::covector(&frame.normals[0])?)?;
    let (pairings, nat) = pointwise_stress_checks(&frame, &sigma)?;
    println!("σ = Pw ⊗ n: pairings {pairings:.6?}, normal at tangential {nat:.12}, ‖Pw‖ {:.12}", norm2(&pw));
    Ok(())
}
