mod algebra;
mod applications;
mod differential;
mod integral;

use crate::differential::FdMode;
use crate::registry::{self, GeometryInfo};

use super::{Check, Suite};

pub(super) fn build(suite: Suite, selected: Option<&str>, mode: FdMode) -> Vec<Check> {
    match suite {
        Suite::TensorAlgebra => algebra::tensor_algebra(),
        Suite::Projection => algebra::projection(selected),
        Suite::DifferentialIdentities => differential::identities(selected, mode),
        Suite::Stokes => integral::stokes(selected),
        Suite::Curl => integral::curl(selected, mode),
        Suite::Laplacian => integral::laplacian(selected, mode),
        Suite::Euler => applications::euler(),
        Suite::Stress => applications::stress(mode),
        Suite::Evolving => applications::evolving(),
        Suite::All => Vec::new(),
    }
}

/// Tolerance for finite-difference modes and for the analytic mode.
fn tol(mode: FdMode, fd: f64, analytic: f64) -> f64 {
    match mode {
        FdMode::Analytic => analytic,
        FdMode::Fd2 | FdMode::Fd4 => fd,
    }
}

/// Geometries for checks that run on any compatible geometry: the selected
/// one when compatible, otherwise `defaults`.
fn targets(selected: Option<&str>, defaults: &[&'static str], compatible: impl Fn(&GeometryInfo) -> bool) -> Vec<&'static str> {
    match selected {
        Some(name) => match registry::info(name) {
            Ok(info) if compatible(info) => vec![info.name],
            _ => Vec::new(),
        },
        None => defaults.to_vec(),
    }
}
