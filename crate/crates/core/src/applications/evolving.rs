//! Evolving submanifolds: material derivatives, transport and the Dirichlet energy rate.

use serde::Serialize;

use crate::differential::{
    covariant_gradient, divergence, gradient, material_derivative, project, projector_rate, submanifold_gradient,
};
use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::geometry::Geometry;
use crate::integration::{Atlas, Residual};
use crate::tensor::Tensor;

/// Time-dependent geometry sampled by an atlas at `t0`, a material velocity `w` and a tensor field `T`.
#[derive(Clone, Debug)]
pub struct EvolvingScenario {
    pub atlas: Atlas,
    pub velocity: TensorField,
    pub field: TensorField,
    /// Step of the central-difference oracle in time.
    pub oracle_step: f64,
}

impl EvolvingScenario {
    /// Fails when material paths started on `M(t0)` leave the level sets (checked to 1e-6).
    pub fn new(atlas: Atlas, velocity: TensorField, field: TensorField, oracle_step: f64) -> Result<Self> {
        if !(oracle_step > 0.0 && oracle_step.is_finite()) {
            return Err(Error::Config(format!("oracle step must be positive, got {oracle_step}")));
        }
        atlas.advected(&velocity, oracle_step)?;
        atlas.advected(&velocity, -oracle_step)?;
        Ok(Self { atlas, velocity, field, oracle_step })
    }

    pub fn geometry(&self) -> &Geometry {
        self.atlas.geometry()
    }

    pub fn time(&self) -> f64 {
        self.atlas.time()
    }

    pub fn with_field(&self, field: TensorField) -> Self {
        Self { field, ..self.clone() }
    }

    fn central_difference(&self, value: impl Fn(&Atlas) -> Result<Tensor>) -> Result<Tensor> {
        let h = self.oracle_step;
        let ahead = value(&self.atlas.advected(&self.velocity, h)?)?;
        let behind = value(&self.atlas.advected(&self.velocity, -h)?)?;
        Ok(ahead.sub(&behind)?.scale(0.5 / h))
    }
}

/// `E = ½ ∫ ‖∇_M T‖²` on the atlas at its own time.
pub fn dirichlet_energy(atlas: &Atlas, field: &TensorField) -> Result<f64> {
    let t = atlas.time();
    let g = submanifold_gradient(atlas.geometry(), field)?;
    let v = atlas.integrate_with(|n| {
        let gv = g.eval(&n.x, t)?;
        Tensor::scalar(n.x.len(), 0.5 * gv.frobenius(&gv)?)
    })?;
    Ok(v.value())
}

#[derive(Clone, Debug, Serialize)]
pub struct DirichletRate {
    /// `∫ ∇_M T ⊙ ∇_M(𝒟_w T)`.
    pub transport: f64,
    /// `½ ∫ ‖∇_M T‖² div_M w`.
    pub stretching: f64,
    /// `−∫ (∇_M T ⊚ ∇^cov w) ⊙ ∇_M T`.
    pub shear: f64,
    pub formula: f64,
    /// Central difference of `E` over advected atlases.
    pub oracle: f64,
    pub residual: Residual,
}

pub fn dirichlet_rate(scenario: &EvolvingScenario) -> Result<DirichletRate> {
    let atlas = &scenario.atlas;
    let geom = atlas.geometry();
    let t = atlas.time();
    let (w, f) = (&scenario.velocity, &scenario.field);
    let gm = submanifold_gradient(geom, f)?;
    let gm_dt = submanifold_gradient(geom, &material_derivative(geom, f, w)?)?;
    let div_w = divergence(geom, w)?;
    let cov_w = covariant_gradient(geom, w)?;
    let parts = atlas.integrate_with(|n| {
        let g = gm.eval(&n.x, t)?;
        let a = g.frobenius(&gm_dt.eval(&n.x, t)?)?;
        let b = 0.5 * g.frobenius(&g)? * div_w.eval_scalar(&n.x, t)?;
        let c = -g.bigcirc(&cov_w.eval(&n.x, t)?)?.frobenius(&g)?;
        Tensor::covector(&[a, b, c])
    })?;
    let p = parts.as_slice();
    let formula = p[0] + p[1] + p[2];
    let oracle = scenario.central_difference(|a| Tensor::scalar(1, dirichlet_energy(a, f)?))?.value();
    Ok(DirichletRate {
        transport: p[0],
        stretching: p[1],
        shear: p[2],
        formula,
        oracle,
        residual: Residual::scalars(formula, oracle),
    })
}

/// `d/dt ∫ T̃ = ∫ 𝒟_w T̃ + ∫ (div_M w) T̃`, left side by central differences over advected atlases.
pub fn reynolds_residual(scenario: &EvolvingScenario, field: &TensorField) -> Result<Residual> {
    let atlas = &scenario.atlas;
    let geom = atlas.geometry();
    let w = &scenario.velocity;
    let rhs = atlas.integrate_tensor(&material_derivative(geom, field, w)?.add(&field.times(&divergence(geom, w)?)?)?)?;
    let lhs = scenario.central_difference(|a| a.integrate_tensor(field))?;
    Residual::new(lhs, rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorResiduals {
    /// `max ‖∇(𝒟_w T) − 𝒟_w(∇T) − ∇T ⊚ ∇w‖`.
    pub ambient: f64,
    /// `max ‖∇_M(𝒟_w T) − 𝒟_w(∇_M T) − ∇T ⊚ (2C[w] + ∇_M w)‖`.
    pub submanifold: f64,
    /// `max ‖𝒟_w P + 2C[w]‖`.
    pub projector: f64,
    /// `max ‖ℙ C[w]‖`.
    pub tangential_rate: f64,
}

/// Pointwise commutator identities at `points` (time of the scenario).
pub fn commutator_residuals(geom: &Geometry, w: &TensorField, f: &TensorField, points: &[Vec<f64>], t: f64) -> Result<CommutatorResiduals> {
    let grad_f = gradient(geom, f)?;
    let grad_w = gradient(geom, w)?;
    let c = projector_rate(geom, w)?;
    let a_lhs = gradient(geom, &material_derivative(geom, f, w)?)?.sub(&material_derivative(geom, &grad_f, w)?)?;
    let a_rhs = grad_f.bigcirc(&grad_w)?;
    let gm_w = submanifold_gradient(geom, w)?;
    let m_lhs = submanifold_gradient(geom, &material_derivative(geom, f, w)?)?
        .sub(&material_derivative(geom, &submanifold_gradient(geom, f)?, w)?)?;
    let m_rhs = grad_f.bigcirc(&c.scale(2.0)?.add(&gm_w)?)?;
    let dp = material_derivative(geom, &geom.projector_field(), w)?.add(&c.scale(2.0)?)?;
    let pc = project(geom, &c)?;
    let mut out = CommutatorResiduals { ambient: 0.0, submanifold: 0.0, projector: 0.0, tangential_rate: 0.0 };
    for x in points {
        crate::differential::check_unit_gradients(geom, x, t, 1e-6)?;
        out.ambient = out.ambient.max(a_lhs.eval(x, t)?.distance(&a_rhs.eval(x, t)?)?);
        out.submanifold = out.submanifold.max(m_lhs.eval(x, t)?.distance(&m_rhs.eval(x, t)?)?);
        out.projector = out.projector.max(dp.eval(x, t)?.norm());
        out.tangential_rate = out.tangential_rate.max(pc.eval(x, t)?.norm());
    }
    Ok(out)
}

/// `max |(∇_M T ⊚ A) ⊙ ∇_M S − (∇_M T ⊚ ℙA) ⊙ ∇_M S|` over `points` for rank-2 `A`.
pub fn tangential_pairing_residual(
    geom: &Geometry,
    f: &TensorField,
    s: &TensorField,
    a: &TensorField,
    points: &[Vec<f64>],
    t: f64,
) -> Result<f64> {
    if a.rank() != 2 || f.rank() != s.rank() {
        return Err(Error::ArgumentMismatch {
            op: "tangential_pairing_residual",
            expected: "rank-2 A and T, S of equal rank".into(),
            got: format!("A {}, T {}, S {}", a.shape(), f.shape(), s.shape()),
        });
    }
    let gf = submanifold_gradient(geom, f)?;
    let gs = submanifold_gradient(geom, s)?;
    let pa = project(geom, a)?;
    let mut worst: f64 = 0.0;
    for x in points {
        let (g, h) = (gf.eval(x, t)?, gs.eval(x, t)?);
        let lhs = g.bigcirc(&a.eval(x, t)?)?.frobenius(&h)?;
        let rhs = g.bigcirc(&pa.eval(x, t)?)?.frobenius(&h)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
