//! Ambient and submanifold differential operators on [`TensorField`]s.
//!
//! Every operator returns a new field, so results can be differentiated again.
//! The derivative index is always the deepest slot.

pub mod engine;

use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::geometry::Geometry;
use crate::tensor::norm2;

pub use engine::{DerivativeEngine, EngineConfig, FdMode, Tube};

/// Cartesian gradient `∇F` using the geometry's engine (stencils stay in the tube).
pub fn gradient(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    geom.engine().gradient(f)
}

/// `∂_t F`.
pub fn time_derivative(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    geom.engine().time_derivative(f)
}

/// `∇_M F = ∇F ⊚ P`.
pub fn submanifold_gradient(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    gradient(geom, f)?.bigcirc(&geom.projector_field())
}

/// `Div_M F`: trace of `∇_M F` over its two deepest slots.
pub fn divergence(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    if f.rank() == 0 {
        return Err(Error::Rank {
            op: "divergence",
            rank: 0,
            requirement: "rank >= 1",
        });
    }
    submanifold_gradient(geom, f)?.trace_last_two()
}

/// Tangential projection `ℙF` applied pointwise.
pub fn project(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    let q = f.rank();
    if q == 0 {
        return Ok(f.clone());
    }
    let mut inputs = vec![f.clone()];
    inputs.extend(std::iter::repeat_n(geom.projector_field(), q));
    TensorField::multilinear(inputs, f.shape(), "project", |a| {
        let mats: Vec<&crate::tensor::Tensor> = a[1..].iter().collect();
        a[0].apply_per_slot(&mats)
    })
}

/// `∇^cov F = ℙ(∇_M F)`.
pub fn covariant_gradient(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    project(geom, &submanifold_gradient(geom, f)?)
}

/// Mean curvature vector `κ = Div_M N` (components `κ_j = div_M N_j`).
pub fn mean_curvature(geom: &Geometry) -> Result<TensorField> {
    divergence(geom, &geom.normal_projector_field())
}

/// Shape operator `B_i = ∇_M n_i`.
pub fn shape_operator(geom: &Geometry, i: usize) -> Result<TensorField> {
    submanifold_gradient(geom, &geom.normal_field(i)?)
}

/// `Curl_Γ F = −Div_M(F ⊚ D)`: lowers the rank; for vectors `curl_Γ u = −div_M u†`.
pub fn curl(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    if f.rank() == 0 {
        return Err(Error::Rank {
            op: "curl",
            rank: 0,
            requirement: "rank >= 1",
        });
    }
    let rotated = f.bigcirc(&geom.dagger_field()?)?;
    divergence(geom, &rotated)?.scale(-1.0)
}

/// `𝐂𝐮𝐫𝐥_Γ F = ∇_M F ⊚ D`: raises the rank; for scalars `(∇_M f)†`.
pub fn curl_up(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    submanifold_gradient(geom, f)?.bigcirc(&geom.dagger_field()?)
}

/// `Δ_M F = Div_M ∇_M F`.
pub fn laplacian_extrinsic(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    divergence(geom, &submanifold_gradient(geom, f)?)
}

/// `Δ^cov F = ℙ Div_M ∇^cov F`.
pub fn laplacian_covariant(geom: &Geometry, f: &TensorField) -> Result<TensorField> {
    project(geom, &divergence(geom, &covariant_gradient(geom, f)?)?)
}

/// Material derivative `𝒟_w F = ∂_t F + ∇F · w`.
pub fn material_derivative(geom: &Geometry, f: &TensorField, w: &TensorField) -> Result<TensorField> {
    let convective = gradient(geom, f)?.insert_right(w)?;
    time_derivative(geom, f)?.add(&convective)
}

/// `C[w] = ½ Σ_i (𝒟_w n_i ⊗ n_i + n_i ⊗ 𝒟_w n_i)`, so that `𝒟_w P = −2 C[w]`.
pub fn projector_rate(geom: &Geometry, w: &TensorField) -> Result<TensorField> {
    let mut terms = Vec::new();
    for i in 0..geom.codim() {
        let n = geom.normal_field(i)?;
        let dn = material_derivative(geom, &n, w)?;
        terms.push((0.5, dn.outer(&n)?));
        terms.push((0.5, n.outer(&dn)?));
    }
    TensorField::linear_combination(terms)
}

/// Unit-gradient hypothesis needed for the projector-rate identities.
pub fn check_unit_gradients(geom: &Geometry, x: &[f64], t: f64, tol: f64) -> Result<()> {
    for (i, g) in geom.gradient_fields().iter().enumerate() {
        let norm = norm2(&g.eval_vector(x, t)?);
        if (norm - 1.0).abs() > tol {
            return Err(Error::Hypothesis(format!(
                "level function {} has |grad d| = {norm:.8} (expected 1)",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Pointwise `C[w]` after checking that the level functions are signed distances.
pub fn projector_rate_at(geom: &Geometry, w: &TensorField, x: &[f64], t: f64) -> Result<crate::tensor::Tensor> {
    check_unit_gradients(geom, x, t, 1e-6)?;
    projector_rate(geom, w)?.eval(x, t)
}

#[cfg(test)]
mod tests;
