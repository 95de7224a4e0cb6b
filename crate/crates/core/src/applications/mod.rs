//! Incompressible Euler flow, Cauchy stress and evolving-surface energies on submanifolds.

pub mod euler;
pub mod evolving;
pub mod stress;

use crate::integration::Atlas;

pub use euler::{
    divergence_form_field, divergence_identity_residual, euler_residual, extrinsic_momentum, force_balance_residual,
    momentum_field, momentum_flux_integral, tangent_velocity_residual, EulerResiduals, EulerState, ForceBalance,
};
pub use evolving::{
    commutator_residuals, dirichlet_energy, dirichlet_rate, reynolds_residual, tangential_pairing_residual,
    CommutatorResiduals, DirichletRate, EvolvingScenario,
};
pub use stress::{
    equilibrium_diagnostics, generator_identity_residual, pointwise_stress_checks, stress_force, stress_torque,
    torque_alternative, torque_equivalence_residual, EquilibriumDiagnostics, RotationGenerators, StressState,
};

/// At most `max` interior quadrature nodes, evenly strided in node order.
pub fn sample_points(atlas: &Atlas, max: usize) -> Vec<Vec<f64>> {
    let nodes = atlas.nodes();
    if nodes.is_empty() || max == 0 {
        return Vec::new();
    }
    let stride = nodes.len().div_ceil(max).max(1);
    nodes.iter().step_by(stride).map(|n| n.x.clone()).collect()
}

#[cfg(test)]
mod tests;
