//! Incompressible Euler flow on a submanifold in extrinsic (ambient-vector) form.

use serde::Serialize;

use crate::differential::{covariant_gradient, divergence, mean_curvature, project, shape_operator, submanifold_gradient, time_derivative};
use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::geometry::Geometry;
use crate::integration::{Atlas, Residual};
use crate::tensor::{dot, Tensor};

use super::sample_points;

#[derive(Clone, Debug)]
pub struct EulerState {
    pub velocity: TensorField,
    pub pressure: TensorField,
    pub density: f64,
}

impl EulerState {
    pub fn new(velocity: TensorField, pressure: TensorField, density: f64) -> Result<Self> {
        if velocity.rank() != 1 || pressure.rank() != 0 || velocity.dim() != pressure.dim() {
            return Err(Error::ArgumentMismatch {
                op: "EulerState",
                expected: "rank-1 velocity and rank-0 pressure on the same space".into(),
                got: format!("{} and {}", velocity.shape(), pressure.shape()),
            });
        }
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::Config(format!("density must be positive, got {density}")));
        }
        Ok(Self { velocity, pressure, density })
    }

    /// Checks `u = ℙu` at the given points.
    pub fn check_tangential(&self, geom: &Geometry, points: &[Vec<f64>], t: f64, tol: f64) -> Result<()> {
        for x in points {
            let frame = geom.frame_at(x, t)?;
            let u = self.velocity.eval(x, t)?;
            if !frame.is_tangent(&u, tol)? {
                return Err(Error::Hypothesis(format!("velocity is not tangential at {x:?}")));
            }
        }
        Ok(())
    }
}

/// `J = ∫ ρ u`.
pub fn extrinsic_momentum(atlas: &Atlas, state: &EulerState) -> Result<Tensor> {
    Ok(atlas.integrate_tensor(&state.velocity)?.scale(state.density))
}

/// `∫ Pu = −∫ div_M(Pu) r + ∫_{∂M} (u·t) r`.
pub fn tangent_velocity_residual(atlas: &Atlas, u: &TensorField) -> Result<Residual> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let pu = project(geom, u)?;
    let div = divergence(geom, &pu)?;
    let lhs = atlas.integrate_tensor(&pu)?;
    let volume = atlas.integrate_with(|n| Ok(Tensor::covector(&n.x)?.scale(-div.eval_scalar(&n.x, t)?)))?;
    let rhs = match atlas.integrate_boundary_with(|b| Ok(Tensor::covector(&b.x)?.scale(dot(&u.eval_vector(&b.x, t)?, &b.t))))? {
        Some(bd) => volume.add(&bd)?,
        None => volume,
    };
    Residual::new(lhs, rhs)
}

/// `ρ(∂_t u + (∇^cov u)·u) + ∇_M p`.
pub fn momentum_field(geom: &Geometry, state: &EulerState) -> Result<TensorField> {
    let u = &state.velocity;
    let convective = covariant_gradient(geom, u)?.insert_right(u)?;
    let inertial = time_derivative(geom, u)?.add(&convective)?.scale(state.density)?;
    inertial.add(&submanifold_gradient(geom, &state.pressure)?)
}

/// `ρ ∂_t u + ℙ Div_M(ρ u⊗u + pP)`.
pub fn divergence_form_field(geom: &Geometry, state: &EulerState) -> Result<TensorField> {
    let u = &state.velocity;
    let flux = u.outer(u)?.scale(state.density)?.add(&geom.projector_field().times(&state.pressure)?)?;
    let div = project(geom, &divergence(geom, &flux)?)?;
    time_derivative(geom, u)?.scale(state.density)?.add(&div)
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerResiduals {
    /// Max over samples of `‖ρ(∂_t u + (∇^cov u)·u) + ∇_M p‖`.
    pub momentum: f64,
    /// Max of `|div_M u|`.
    pub divergence: f64,
    /// Max of `|u·t|` on `∂M` (0 on closed `M`).
    pub boundary_slip: f64,
    /// Max of the divergence-form residual at the same samples.
    pub divergence_form: f64,
    /// Max difference between the two forms.
    pub form_mismatch: f64,
    pub samples: usize,
}

pub fn euler_residual(atlas: &Atlas, state: &EulerState, t: f64, max_samples: usize) -> Result<EulerResiduals> {
    let geom = atlas.geometry();
    let momentum = momentum_field(geom, state)?;
    let conservative = divergence_form_field(geom, state)?;
    let div = divergence(geom, &state.velocity)?;
    let points = sample_points(atlas, max_samples);
    let mut out = EulerResiduals {
        momentum: 0.0,
        divergence: 0.0,
        boundary_slip: 0.0,
        divergence_form: 0.0,
        form_mismatch: 0.0,
        samples: points.len(),
    };
    for x in &points {
        let m = momentum.eval(x, t)?;
        let c = conservative.eval(x, t)?;
        out.momentum = out.momentum.max(m.norm());
        out.divergence_form = out.divergence_form.max(c.norm());
        out.form_mismatch = out.form_mismatch.max(m.distance(&c)?);
        out.divergence = out.divergence.max(div.eval_scalar(x, t)?.abs());
    }
    for b in atlas.boundary_nodes() {
        let slip = dot(&state.velocity.eval_vector(&b.point.x, t)?, &b.point.t).abs();
        out.boundary_slip = out.boundary_slip.max(slip);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ForceBalance {
    /// `∫ p κ`.
    pub pressure_curvature: Tensor,
    /// `∫_{∂M} p t`.
    pub boundary_pressure: Tensor,
    /// `Σ_i ∫ ρ (B_i(u)·u) n_i`.
    pub centripetal: Tensor,
    pub sum: Tensor,
}

/// Steady force balance between pressure on the curvature and the centripetal term.
pub fn force_balance_residual(atlas: &Atlas, state: &EulerState) -> Result<ForceBalance> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let (u, p) = (&state.velocity, &state.pressure);
    let kappa = mean_curvature(geom)?;
    let pressure_curvature = atlas.integrate_tensor(&kappa.times(p)?)?;
    let boundary_pressure = match atlas.integrate_boundary_with(|b| Ok(Tensor::covector(&b.t)?.scale(p.eval_scalar(&b.x, t)?)))? {
        Some(v) => v,
        None => Tensor::zeros(geom.dim(), 1)?,
    };
    let mut terms = Vec::new();
    for i in 0..geom.codim() {
        let b = shape_operator(geom, i)?;
        let n = geom.normal_field(i)?;
        terms.push((b, n));
    }
    let centripetal = atlas.integrate_with(|node| {
        let uv = u.eval_vector(&node.x, t)?;
        let mut acc = Tensor::zeros(geom.dim(), 1)?;
        for (b, n) in &terms {
            let s = b.eval(&node.x, t)?.insert_left(&uv)?.insert_left(&uv)?.value();
            acc.add_assign_scaled(state.density * s, &n.eval(&node.x, t)?)?;
        }
        Ok(acc)
    })?;
    let sum = pressure_curvature.add(&boundary_pressure)?.add(&centripetal)?;
    Ok(ForceBalance { pressure_curvature, boundary_pressure, centripetal, sum })
}

/// `∫ ℙ Div_M(ρ u⊗u + pP)`, which vanishes for steady flow on closed `M`.
pub fn momentum_flux_integral(atlas: &Atlas, state: &EulerState) -> Result<Tensor> {
    let geom = atlas.geometry();
    let u = &state.velocity;
    let flux = u.outer(u)?.scale(state.density)?.add(&geom.projector_field().times(&state.pressure)?)?;
    atlas.integrate_tensor(&project(geom, &divergence(geom, &flux)?)?)
}

/// Max over points of `‖ℙ Div_M(u⊗u) − (∇^cov u)·u‖` (requires `div_M u = 0`).
pub fn divergence_identity_residual(geom: &Geometry, u: &TensorField, points: &[Vec<f64>], t: f64) -> Result<f64> {
    let lhs = project(geom, &divergence(geom, &u.outer(u)?)?)?;
    let rhs = covariant_gradient(geom, u)?.insert_right(u)?;
    let mut worst: f64 = 0.0;
    for x in points {
        worst = worst.max(lhs.eval(x, t)?.distance(&rhs.eval(x, t)?)?);
    }
    Ok(worst)
}
