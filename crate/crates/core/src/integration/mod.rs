//! Quadrature over `M` and `∂M` and the integral identities built on it.

pub mod atlas;
pub mod atlases;
pub mod quadrature;

use serde::Serialize;

use crate::differential::{covariant_gradient, curl, divergence, mean_curvature, submanifold_gradient};
use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::tensor::{unit_vector, Tensor};

pub use atlas::{gram_factor, Atlas, BoundaryNode, BoundaryPoint, Chart, QuadNode, QuadratureSpec, Side};
pub use atlases::{
    circle_atlas, disk_atlas, expanding_sphere_atlas, helix_atlas, hemisphere_atlas, rotating_disk_atlas, sphere_atlas,
    torus_atlas,
};
pub use quadrature::{pairwise_sum, GaussLegendre};

/// Two sides of an identity with absolute and relative mismatch.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub lhs: Tensor,
    pub rhs: Tensor,
    pub abs: f64,
    /// `abs / max(1, max(‖lhs‖, ‖rhs‖))`.
    pub rel: f64,
}

impl Residual {
    pub fn new(lhs: Tensor, rhs: Tensor) -> Result<Self> {
        let abs = lhs.distance(&rhs)?;
        let rel = abs / 1f64.max(lhs.norm().max(rhs.norm()));
        Ok(Self { lhs, rhs, abs, rel })
    }

    pub fn scalars(lhs: f64, rhs: f64) -> Self {
        let abs = (lhs - rhs).abs();
        let rel = abs / 1f64.max(lhs.abs().max(rhs.abs()));
        let wrap = |v| Tensor::from_flat(1, 0, vec![v]).expect("scalar");
        Self { lhs: wrap(lhs), rhs: wrap(rhs), abs, rel }
    }
}

/// Terms of `∫ Div_M T = ∫_{∂M} T·t + ∫ T·κ` (or its gradient version).
#[derive(Clone, Debug, Serialize)]
pub struct StokesTerms {
    pub interior: Tensor,
    pub boundary: Tensor,
    pub curvature: Tensor,
    pub residual: Residual,
}

fn require_rank(op: &'static str, f: &TensorField, requirement: &'static str, ok: bool) -> Result<()> {
    if !ok {
        return Err(Error::Rank { op, rank: f.rank(), requirement });
    }
    Ok(())
}

fn boundary_or_zero(value: Option<Tensor>, dim: usize, rank: usize) -> Result<Tensor> {
    match value {
        Some(v) => Ok(v),
        None => Tensor::zeros(dim, rank),
    }
}

/// `∫ Div_M T = ∫_{∂M} T·t + ∫ T·κ` for rank ≥ 1.
pub fn stokes_residual(atlas: &Atlas, f: &TensorField) -> Result<StokesTerms> {
    require_rank("stokes_residual", f, "rank >= 1", f.rank() >= 1)?;
    let geom = atlas.geometry();
    let t = atlas.time();
    let div = divergence(geom, f)?;
    let kappa = mean_curvature(geom)?;
    let interior = atlas.integrate_tensor(&div)?;
    let curvature = atlas.integrate_with(|n| f.eval(&n.x, t)?.insert_right(&kappa.eval_vector(&n.x, t)?))?;
    let boundary = atlas.integrate_boundary_with(|b| f.eval(&b.x, t)?.insert_right(&b.t))?;
    let boundary = boundary_or_zero(boundary, f.dim(), f.rank() - 1)?;
    let residual = Residual::new(interior.clone(), boundary.add(&curvature)?)?;
    Ok(StokesTerms { interior, boundary, curvature, residual })
}

/// `∫ ∇_M T = ∫_{∂M} T ⊗ t + ∫ T ⊗ κ` for any rank.
pub fn gradient_stokes_residual(atlas: &Atlas, f: &TensorField) -> Result<StokesTerms> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let grad = submanifold_gradient(geom, f)?;
    let kappa = mean_curvature(geom)?;
    let interior = atlas.integrate_tensor(&grad)?;
    let curvature = atlas.integrate_with(|n| f.eval(&n.x, t)?.outer(&kappa.eval(&n.x, t)?))?;
    let boundary = atlas.integrate_boundary_with(|b| f.eval(&b.x, t)?.outer(&Tensor::covector(&b.t)?))?;
    let boundary = boundary_or_zero(boundary, f.dim(), f.rank() + 1)?;
    let residual = Residual::new(interior.clone(), boundary.add(&curvature)?)?;
    Ok(StokesTerms { interior, boundary, curvature, residual })
}

/// `∫ Curl_Γ T = ∫_{∂Γ} T·τ` on a two-dimensional `Γ`.
pub fn circulation_residual(atlas: &Atlas, f: &TensorField) -> Result<Residual> {
    require_rank("circulation_residual", f, "rank >= 1", f.rank() >= 1)?;
    let geom = atlas.geometry();
    if geom.manifold_dim() != 2 {
        return Err(Error::WrongCodimension { op: "circulation_residual", dim: geom.manifold_dim() });
    }
    let t = atlas.time();
    let lhs = atlas.integrate_tensor(&curl(geom, f)?)?;
    let rhs = atlas.integrate_boundary_with(|b| {
        let tau = b.tau.as_ref().ok_or_else(|| Error::Degenerate("boundary point without orientation".into()))?;
        f.eval(&b.x, t)?.insert_right(tau)
    })?;
    let rhs = boundary_or_zero(rhs, f.dim(), f.rank() - 1)?;
    Residual::new(lhs, rhs)
}

/// `T : ∇_M S` generalized to `rank T > rank S + 1`: contracts the leading slots of `T`
/// with those of `S` and the last slot of `T` with the derivative slot.
pub fn gradient_pairing(grad_s: &Tensor, t: &Tensor) -> Result<Tensor> {
    let n = t.dim();
    let s = grad_s.rank() - 1;
    if t.rank() < s + 1 {
        return Err(Error::Rank { op: "gradient_pairing", rank: t.rank(), requirement: "rank T > rank S" });
    }
    let mut acc = Tensor::zeros(n, t.rank() - s - 1)?;
    for k in 0..n {
        let e = unit_vector(n, k);
        let part = grad_s.insert_right(&e)?.contract_left(t)?.insert_right(&e)?;
        acc.add_assign_scaled(1.0, &part)?;
    }
    Ok(acc)
}

/// `∫ S:Div_M T + ∫ T:∇_M S = ∫_{∂M} (S:T)·t + ∫ (S:T)·κ` for `rank T > rank S`.
pub fn integration_by_parts_residual(atlas: &Atlas, s: &TensorField, f: &TensorField) -> Result<Residual> {
    if f.rank() <= s.rank() {
        return Err(Error::Rank {
            op: "integration_by_parts_residual",
            rank: f.rank(),
            requirement: "rank T > rank S",
        });
    }
    let geom = atlas.geometry();
    let t = atlas.time();
    let div = divergence(geom, f)?;
    let grad_s = submanifold_gradient(geom, s)?;
    let kappa = mean_curvature(geom)?;
    let lhs = atlas.integrate_with(|n| {
        let sv = s.eval(&n.x, t)?;
        let tv = f.eval(&n.x, t)?;
        sv.contract_left(&div.eval(&n.x, t)?)?.add(&gradient_pairing(&grad_s.eval(&n.x, t)?, &tv)?)
    })?;
    let curvature = atlas.integrate_with(|n| {
        s.eval(&n.x, t)?.contract_left(&f.eval(&n.x, t)?)?.insert_right(&kappa.eval_vector(&n.x, t)?)
    })?;
    let boundary = atlas.integrate_boundary_with(|b| s.eval(&b.x, t)?.contract_left(&f.eval(&b.x, t)?)?.insert_right(&b.t))?;
    let boundary = boundary_or_zero(boundary, f.dim(), f.rank() - s.rank() - 1)?;
    Residual::new(lhs, boundary.add(&curvature)?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WeakForm {
    /// `a^cov(T, S) = ∫ ∇^cov T ⊙ ∇^cov S`.
    pub bilinear: f64,
    /// `ℓ(S) = ∫_{∂M} S ⊙ q + ∫ S ⊙ f`.
    pub linear: f64,
}

pub fn weak_form_eval(
    atlas: &Atlas,
    t_field: &TensorField,
    s_field: &TensorField,
    forcing: &TensorField,
    flux: Option<&TensorField>,
) -> Result<WeakForm> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let ct = covariant_gradient(geom, t_field)?;
    let cs = covariant_gradient(geom, s_field)?;
    let a = atlas.integrate_with(|n| Tensor::scalar(n.x.len(), ct.eval(&n.x, t)?.frobenius(&cs.eval(&n.x, t)?)?))?;
    let vol = atlas.integrate_with(|n| Tensor::scalar(n.x.len(), s_field.eval(&n.x, t)?.frobenius(&forcing.eval(&n.x, t)?)?))?;
    let bdry = match flux {
        Some(q) => atlas
            .integrate_boundary_with(|b| Tensor::scalar(b.x.len(), s_field.eval(&b.x, t)?.frobenius(&q.eval(&b.x, t)?)?))?
            .map(|v| v.value())
            .unwrap_or(0.0),
        None => 0.0,
    };
    Ok(WeakForm { bilinear: a.value(), linear: bdry + vol.value() })
}

/// `∫_γ ∇_M T · w = T(b) − T(a)` on a single-chart curve with unit tangent `w` along the chart.
pub fn path_ftc_residual(atlas: &Atlas, f: &TensorField) -> Result<Residual> {
    let geom = atlas.geometry();
    if geom.manifold_dim() != 1 || atlas.charts().len() != 1 {
        return Err(Error::WrongCodimension { op: "path_ftc_residual", dim: geom.manifold_dim() });
    }
    let t = atlas.time();
    let grad = submanifold_gradient(geom, f)?;
    let lhs = atlas.integrate_with(|n| {
        let j = &n.tangents[0];
        let s = crate::tensor::norm2(j);
        let w: Vec<f64> = j.iter().map(|c| c / s).collect();
        grad.eval(&n.x, t)?.insert_right(&w)
    })?;
    let chart = &atlas.charts()[0];
    let rhs = f.eval(&chart.point(&chart.hi)?, t)?.sub(&f.eval(&chart.point(&chart.lo)?, t)?)?;
    Residual::new(lhs, rhs)
}
