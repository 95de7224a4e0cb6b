//! Level-set description of embedded submanifolds and their pointwise frames.

mod builtins;
mod fields;
mod frame;

use std::fmt;
use std::sync::Arc;

pub use builtins::{
    circle2d, circle3d, expanding_sphere, helix_segment, hemisphere, plane_disk, rotating_plane, sphere,
    torus, LevelSpec,
};
pub use frame::{determinant, GeometryFrame, TangentBasis2D};

use crate::differential::engine::{DerivativeEngine, EngineConfig, Tube};
use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::tensor::{dot, norm2};

/// Default lower bound for gradient norms and Gram–Schmidt residuals.
pub const GRAD_FLOOR: f64 = 1e-8;

/// `M = {x : d_1(x, t) = ... = d_m(x, t) = 0}` inside the tube `sum |d_i| < δ`.
pub struct LevelSetGeometry {
    name: String,
    dim: usize,
    levels: Vec<TensorField>,
    gradients: Vec<TensorField>,
    tube_halfwidth: f64,
    time_dependent: bool,
    grad_floor: f64,
    engine: DerivativeEngine,
}

impl fmt::Debug for LevelSetGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LevelSetGeometry")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("codim", &self.codim())
            .field("tube_halfwidth", &self.tube_halfwidth)
            .field("time_dependent", &self.time_dependent)
            .finish()
    }
}

pub type Geometry = Arc<LevelSetGeometry>;

impl LevelSetGeometry {
    pub fn new(
        name: impl Into<String>,
        levels: Vec<TensorField>,
        tube_halfwidth: f64,
        time_dependent: bool,
        config: EngineConfig,
    ) -> Result<Geometry> {
        let first = levels
            .first()
            .ok_or_else(|| Error::InvalidShape("at least one level function is required".into()))?;
        let dim = first.dim();
        let m = levels.len();
        if m >= dim {
            return Err(Error::InvalidShape(format!(
                "codimension {m} must be smaller than the ambient dimension {dim}"
            )));
        }
        if let Some(bad) = levels.iter().find(|d| d.rank() != 0 || d.dim() != dim) {
            return Err(Error::InvalidShape(format!(
                "level functions must be scalar fields on R^{dim}, got {}",
                bad.shape()
            )));
        }
        if !(tube_halfwidth > 0.0) {
            return Err(Error::InvalidShape("tube halfwidth must be positive".into()));
        }
        let engine = DerivativeEngine::new(config).with_tube(Tube {
            levels: levels.clone(),
            halfwidth: tube_halfwidth,
        });
        let gradients = levels
            .iter()
            .map(|d| engine.gradient(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Self {
            name: name.into(),
            dim,
            levels,
            gradients,
            tube_halfwidth,
            time_dependent,
            grad_floor: GRAD_FLOOR,
            engine,
        }))
    }

    /// Same level sets with a different derivative configuration.
    pub fn with_config(&self, config: EngineConfig) -> Result<Geometry> {
        Self::new(
            self.name.clone(),
            self.levels.clone(),
            self.tube_halfwidth,
            self.time_dependent,
            config,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.levels.len()
    }

    pub fn manifold_dim(&self) -> usize {
        self.dim - self.codim()
    }

    pub fn tube_halfwidth(&self) -> f64 {
        self.tube_halfwidth
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    pub fn grad_floor(&self) -> f64 {
        self.grad_floor
    }

    pub fn engine(&self) -> &DerivativeEngine {
        &self.engine
    }

    pub fn level_functions(&self) -> &[TensorField] {
        &self.levels
    }

    pub fn gradient_fields(&self) -> &[TensorField] {
        &self.gradients
    }

    pub fn level_values(&self, x: &[f64], t: f64) -> Result<Vec<f64>> {
        self.levels.iter().map(|d| d.eval_scalar(x, t)).collect()
    }

    pub fn check_tube(&self, x: &[f64], t: f64) -> Result<()> {
        match self.engine.tube() {
            Some(tube) => tube.check(x, t),
            None => Ok(()),
        }
    }

    /// Normals by modified Gram–Schmidt of `∇d_i` in listed order, and the projectors.
    pub fn frame_at(&self, x: &[f64], t: f64) -> Result<GeometryFrame> {
        if x.len() != self.dim {
            return Err(Error::ArgumentMismatch {
                op: "frame_at",
                expected: format!("point in R^{}", self.dim),
                got: format!("R^{}", x.len()),
            });
        }
        self.check_tube(x, t)?;
        let raw = self
            .gradients
            .iter()
            .map(|g| g.eval_vector(x, t))
            .collect::<Result<Vec<_>>>()?;
        let normals = self.orthonormalize(&raw)?;
        GeometryFrame::new(x.to_vec(), t, normals, raw)
    }

    pub(crate) fn orthonormalize(&self, raw: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let mut normals: Vec<Vec<f64>> = Vec::with_capacity(raw.len());
        for (i, g) in raw.iter().enumerate() {
            let norm = norm2(g);
            if !(norm >= self.grad_floor) {
                return Err(Error::DegenerateGradient { index: i, norm });
            }
            let mut v = g.clone();
            for n in &normals {
                let c = dot(&v, n);
                for (vk, nk) in v.iter_mut().zip(n) {
                    *vk -= c * nk;
                }
            }
            let residual = norm2(&v);
            if !(residual >= self.grad_floor) {
                return Err(Error::DependentGradients { index: i, residual });
            }
            normals.push(v.into_iter().map(|c| c / residual).collect());
        }
        Ok(normals)
    }

    /// Unit normal `n_i` as a covector field.
    pub fn normal_field(self: &Arc<Self>, i: usize) -> Result<TensorField> {
        fields::normal(self, i)
    }

    /// `P = I − N`.
    pub fn projector_field(self: &Arc<Self>) -> TensorField {
        fields::projector(self, false)
    }

    /// `N = sum_i n_i ⊗ n_i`.
    pub fn normal_projector_field(self: &Arc<Self>) -> TensorField {
        fields::projector(self, true)
    }

    /// Rank-2 field `D` with `u† = D(u)` on two-dimensional submanifolds.
    pub fn dagger_field(self: &Arc<Self>) -> Result<TensorField> {
        fields::dagger(self)
    }
}

#[cfg(test)]
mod tests;
