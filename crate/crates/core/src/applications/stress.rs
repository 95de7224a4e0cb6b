//! Cauchy stress on submanifolds: force, torque and pointwise equilibrium diagnostics.

use serde::Serialize;

use crate::differential::divergence;
use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::geometry::{Geometry, GeometryFrame};
use crate::integration::{Atlas, Residual};
use crate::tensor::Tensor;

/// A stress field `σ` with `σ(v) = insert_left(σ, v)` and its transpose `σ̄`, so `σ̄·v = σ(v)`.
#[derive(Clone, Debug)]
pub struct StressState {
    pub sigma: TensorField,
    pub sigma_bar: TensorField,
}

impl StressState {
    pub fn new(sigma: TensorField) -> Result<Self> {
        if sigma.rank() != 2 {
            return Err(Error::Rank { op: "StressState", rank: sigma.rank(), requirement: "rank 2" });
        }
        let sigma_bar = sigma.transpose2()?;
        Ok(Self { sigma, sigma_bar })
    }

    /// Stress vector `σ(v)` at a point.
    pub fn traction(&self, x: &[f64], t: f64, v: &[f64]) -> Result<Tensor> {
        self.sigma.eval(x, t)?.insert_left(v)
    }
}

/// `l_ij = x_i e_j − x_j e_i` and `ω_ij = e_i ⊗ P^j − e_j ⊗ P^i` for `i < j`.
#[derive(Clone, Debug)]
pub struct RotationGenerators {
    pub pairs: Vec<(usize, usize)>,
    pub generators: Vec<TensorField>,
    pub omegas: Vec<TensorField>,
}

impl RotationGenerators {
    pub fn new(geom: &Geometry) -> Result<Self> {
        let n = geom.dim();
        let mut pairs = Vec::new();
        let mut generators = Vec::new();
        let mut omegas = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
                let grad = Tensor::from_fn(n, 2, |ab| {
                    let (a, b) = (ab[0], ab[1]);
                    (if a == j && b == i { 1.0 } else { 0.0 }) - (if a == i && b == j { 1.0 } else { 0.0 })
                })?;
                let l = TensorField::builder(n, 1, move |x, _| {
                    let mut v = vec![0.0; n];
                    v[j] += x[i];
                    v[i] -= x[j];
                    v
                })
                .stationary()
                .gradient(TensorField::constant(grad))
                .label(format!("l_{}{}", i + 1, j + 1))
                .build()?;
                generators.push(l);
                let omega = TensorField::multilinear(vec![geom.projector_field()], crate::tensor::TensorShape::new(n, 2)?, "omega", move |a| {
                    let p = &a[0];
                    Tensor::from_fn(n, 2, |ab| {
                        let (r, c) = (ab[0], ab[1]);
                        let mut v = 0.0;
                        if r == i {
                            v += p.get(&[j, c]).unwrap_or(0.0);
                        }
                        if r == j {
                            v -= p.get(&[i, c]).unwrap_or(0.0);
                        }
                        v
                    })
                })?;
                omegas.push(omega);
            }
        }
        Ok(Self { pairs, generators, omegas })
    }

    pub fn labels(&self) -> Vec<String> {
        self.pairs.iter().map(|(i, j)| format!("{}{}", i + 1, j + 1)).collect()
    }
}

/// `F = ∫_{∂M} σ(t) + ∫ σ(κ)`.
pub fn stress_force(atlas: &Atlas, state: &StressState) -> Result<Tensor> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let kappa = crate::differential::mean_curvature(geom)?;
    let volume = atlas.integrate_with(|n| state.traction(&n.x, t, &kappa.eval_vector(&n.x, t)?))?;
    match atlas.integrate_boundary_with(|b| state.traction(&b.x, t, &b.t))? {
        Some(bd) => volume.add(&bd),
        None => Ok(volume),
    }
}

/// `m_K = ∫_{∂M} l_K ⊙ σ(t) + ∫ l_K ⊙ σ(κ)` for every pair `K`.
pub fn stress_torque(atlas: &Atlas, state: &StressState) -> Result<Vec<f64>> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let gens = RotationGenerators::new(geom)?;
    let kappa = crate::differential::mean_curvature(geom)?;
    let mut out = Vec::with_capacity(gens.pairs.len());
    for l in &gens.generators {
        let pair = |x: &[f64], v: &[f64]| -> Result<Tensor> { Tensor::scalar(x.len(), l.eval(x, t)?.frobenius(&state.traction(x, t, v)?)?) };
        let volume = atlas.integrate_with(|node| pair(&node.x, &kappa.eval_vector(&node.x, t)?))?.value();
        let boundary = atlas.integrate_boundary_with(|b| pair(&b.x, &b.t))?.map(|v| v.value()).unwrap_or(0.0);
        out.push(volume + boundary);
    }
    Ok(out)
}

/// `∫ l_K ⊙ Div_M σ̄ − ∫ ω_K ⊙ σ̄` for every pair `K`.
pub fn torque_alternative(atlas: &Atlas, state: &StressState) -> Result<Vec<f64>> {
    let geom = atlas.geometry();
    let t = atlas.time();
    let gens = RotationGenerators::new(geom)?;
    let div = divergence(geom, &state.sigma_bar)?;
    let mut out = Vec::with_capacity(gens.pairs.len());
    for (l, w) in gens.generators.iter().zip(&gens.omegas) {
        let v = atlas.integrate_with(|n| {
            let d = div.eval(&n.x, t)?;
            let s = state.sigma_bar.eval(&n.x, t)?;
            Tensor::scalar(n.x.len(), l.eval(&n.x, t)?.frobenius(&d)? - w.eval(&n.x, t)?.frobenius(&s)?)
        })?;
        out.push(v.value());
    }
    Ok(out)
}

/// Per pair `K`: stress torque against the divergence formula.
pub fn torque_equivalence_residual(atlas: &Atlas, state: &StressState) -> Result<Vec<Residual>> {
    let a = stress_torque(atlas, state)?;
    let b = torque_alternative(atlas, state)?;
    Ok(a.into_iter().zip(b).map(|(x, y)| Residual::scalars(x, y)).collect())
}

/// Per pair `K`: `∫_{∂M} (l_K:A)·t + ∫ (l_K:A)·κ = ∫ l_K:Div_M A − ∫ A ⊙ ω_K` for rank-2 `A`.
pub fn generator_identity_residual(atlas: &Atlas, a: &TensorField) -> Result<Vec<Residual>> {
    if a.rank() != 2 {
        return Err(Error::Rank { op: "generator_identity_residual", rank: a.rank(), requirement: "rank 2" });
    }
    let geom = atlas.geometry();
    let t = atlas.time();
    let gens = RotationGenerators::new(geom)?;
    let kappa = crate::differential::mean_curvature(geom)?;
    let div = divergence(geom, a)?;
    let mut out = Vec::new();
    for (l, w) in gens.generators.iter().zip(&gens.omegas) {
        let la = |x: &[f64]| -> Result<Tensor> { l.eval(x, t)?.contract_left(&a.eval(x, t)?) };
        let curvature = atlas.integrate_with(|n| la(&n.x)?.insert_right(&kappa.eval_vector(&n.x, t)?))?.value();
        let boundary = atlas
            .integrate_boundary_with(|b| la(&b.x)?.insert_right(&b.t))?
            .map(|v| v.value())
            .unwrap_or(0.0);
        let rhs = atlas
            .integrate_with(|n| {
                let lv = l.eval(&n.x, t)?;
                let v = lv.contract_left(&div.eval(&n.x, t)?)?.value() - a.eval(&n.x, t)?.frobenius(&w.eval(&n.x, t)?)?;
                Tensor::scalar(n.x.len(), v)
            })?
            .value();
        out.push(Residual::scalars(boundary + curvature, rhs));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquilibriumDiagnostics {
    /// `Div_M σ̄`.
    pub div_sigma_bar: Vec<f64>,
    /// `ω_K ⊙ σ̄` per pair `K`.
    pub omega_pairings: Vec<f64>,
    /// `max_{|v|=1} ‖N σ(Pv)‖`: normal stress generated by tangential orientations.
    pub normal_at_tangential: f64,
}

/// Pointwise diagnostics; `div_sigma_bar` is omitted (empty) when `with_divergence` is false.
pub fn equilibrium_diagnostics(geom: &Geometry, state: &StressState, x: &[f64], t: f64, with_divergence: bool) -> Result<EquilibriumDiagnostics> {
    let frame = geom.frame_at(x, t)?;
    let sigma = state.sigma.eval(x, t)?;
    let div_sigma_bar = if with_divergence {
        divergence(geom, &state.sigma_bar)?.eval_vector(x, t)?
    } else {
        Vec::new()
    };
    let (omega_pairings, normal_at_tangential) = pointwise_stress_checks(&frame, &sigma)?;
    Ok(EquilibriumDiagnostics { div_sigma_bar, omega_pairings, normal_at_tangential })
}

/// `(ω_K ⊙ σ̄ per K, max_{|v|=1} ‖N σ(Pv)‖)` from a frame and a stress value.
pub fn pointwise_stress_checks(frame: &GeometryFrame, sigma: &Tensor) -> Result<(Vec<f64>, f64)> {
    let n = frame.dim();
    let sigma_bar = sigma.transpose2()?;
    let p = frame.p();
    let mut pairings = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = 0.0;
            for c in 0..n {
                v += p.get(&[j, c])? * sigma_bar.get(&[i, c])? - p.get(&[i, c])? * sigma_bar.get(&[j, c])?;
            }
            pairings.push(v);
        }
    }
    // v ↦ N σ(Pv) = N σᵀ P v
    let nm = frame.n();
    let m = nalgebra::DMatrix::from_fn(n, n, |r, c| {
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                acc += nm.as_slice()[r * n + a] * sigma.as_slice()[b * n + a] * p.as_slice()[b * n + c];
            }
        }
        acc
    });
    let norm = m.singular_values().iter().cloned().fold(0.0, f64::max);
    Ok((pairings, norm))
}
