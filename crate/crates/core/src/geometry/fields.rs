//! Fields derived from the geometry: normals, projectors and the dagger tensor.

use std::sync::Arc;

use crate::differential::engine::DerivativeEngine;
use crate::error::{Error, Result};
use crate::field::{FieldNode, TensorField};
use crate::tensor::{dot, norm2, Tensor, TensorShape};

use super::frame::dagger_from_normals;
use super::LevelSetGeometry;

type Geom = Arc<LevelSetGeometry>;

fn frame_depth(geom: &LevelSetGeometry) -> usize {
    geom.gradient_fields().iter().map(|g| g.fd_depth()).max().unwrap_or(0)
}

fn frame_static(geom: &LevelSetGeometry) -> bool {
    geom.gradient_fields().iter().all(|g| g.is_static())
}

pub(super) fn normal(geom: &Geom, i: usize) -> Result<TensorField> {
    if i >= geom.codim() {
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: geom.codim(),
        });
    }
    Ok(TensorField::from_node(NormalNode { geom: geom.clone(), i }))
}

pub(super) fn projector(geom: &Geom, normal_part: bool) -> TensorField {
    TensorField::from_node(ProjectorNode {
        geom: geom.clone(),
        normal_part,
    })
}

pub(super) fn dagger(geom: &Geom) -> Result<TensorField> {
    if geom.manifold_dim() != 2 {
        return Err(Error::WrongCodimension {
            op: "dagger",
            dim: geom.manifold_dim(),
        });
    }
    let normals = (0..geom.codim())
        .map(|i| normal(geom, i))
        .collect::<Result<Vec<_>>>()?;
    let shape = TensorShape::new(geom.dim(), 2)?;
    TensorField::multilinear(normals, shape, "dagger", |n| {
        let cols: Vec<&[f64]> = n.iter().map(|t| t.as_slice()).collect();
        dagger_from_normals(&cols)
    })
}

/// `N` or `P` written through the normal fields, for analytic differentiation.
fn projector_expression(geom: &Geom, normal_part: bool) -> Result<TensorField> {
    let mut terms = Vec::new();
    for i in 0..geom.codim() {
        let n = normal(geom, i)?;
        terms.push((if normal_part { 1.0 } else { -1.0 }, n.outer(&n)?));
    }
    if !normal_part {
        terms.push((1.0, TensorField::constant(Tensor::identity(geom.dim())?)));
    }
    TensorField::linear_combination(terms)
}

struct NormalNode {
    geom: Geom,
    i: usize,
}

impl FieldNode for NormalNode {
    fn shape(&self) -> TensorShape {
        TensorShape {
            dim: self.geom.dim(),
            rank: 1,
        }
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        let frame = self.geom.frame_at(x, t)?;
        Tensor::covector(&frame.normals[self.i])
    }

    fn label(&self) -> String {
        format!("n_{}", self.i + 1)
    }

    fn fd_depth(&self) -> usize {
        frame_depth(&self.geom)
    }

    fn is_static(&self) -> bool {
        frame_static(&self.geom)
    }

    fn analytic_gradient(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        let derivs = self.geom.gradient_fields()[..=self.i]
            .iter()
            .map(|g| eng.gradient(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(TensorField::from_node(NormalDerivNode {
            geom: self.geom.clone(),
            i: self.i,
            derivs,
            spatial: true,
        })))
    }

    fn analytic_time_derivative(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        let derivs = self.geom.gradient_fields()[..=self.i]
            .iter()
            .map(|g| eng.time_derivative(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(TensorField::from_node(NormalDerivNode {
            geom: self.geom.clone(),
            i: self.i,
            derivs,
            spatial: false,
        })))
    }
}

/// Derivative of `n_i` obtained by differentiating Gram–Schmidt:
/// `δv_i = δg_i − Σ_j [(δg_i·n_j + g_i·δn_j) n_j + (g_i·n_j) δn_j]`,
/// `δn_i = (I − n_i n_iᵀ) δv_i / |v_i|`.
struct NormalDerivNode {
    geom: Geom,
    i: usize,
    derivs: Vec<TensorField>,
    spatial: bool,
}

impl NormalDerivNode {
    fn directional(&self, g: &[Vec<f64>], n: &[Vec<f64>], vnorm: &[f64], dg: &[Vec<f64>]) -> Vec<f64> {
        let mut dn: Vec<Vec<f64>> = Vec::with_capacity(self.i + 1);
        for k in 0..=self.i {
            let mut dv = dg[k].clone();
            for j in 0..k {
                let a = dot(&dg[k], &n[j]) + dot(&g[k], &dn[j]);
                let b = dot(&g[k], &n[j]);
                for c in 0..dv.len() {
                    dv[c] -= a * n[j][c] + b * dn[j][c];
                }
            }
            let along = dot(&dv, &n[k]);
            dn.push(
                dv.iter()
                    .zip(&n[k])
                    .map(|(d, nk)| (d - along * nk) / vnorm[k])
                    .collect(),
            );
        }
        dn.pop().unwrap_or_default()
    }
}

impl FieldNode for NormalDerivNode {
    fn shape(&self) -> TensorShape {
        TensorShape {
            dim: self.geom.dim(),
            rank: if self.spatial { 2 } else { 1 },
        }
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        let frame = self.geom.frame_at(x, t)?;
        let g = &frame.raw_gradients[..=self.i];
        let n = &frame.normals[..=self.i];
        let mut vnorm = Vec::with_capacity(self.i + 1);
        for k in 0..=self.i {
            let mut v = g[k].clone();
            for nj in &n[..k] {
                let c = dot(&g[k], nj);
                for (vc, nc) in v.iter_mut().zip(nj) {
                    *vc -= c * nc;
                }
            }
            vnorm.push(norm2(&v));
        }
        let dim = self.geom.dim();
        let d = self
            .derivs
            .iter()
            .map(|f| f.eval(x, t))
            .collect::<Result<Vec<_>>>()?;
        if self.spatial {
            let mut parts = Vec::with_capacity(dim);
            for l in 0..dim {
                let e = crate::tensor::unit_vector(dim, l);
                let dg = d
                    .iter()
                    .map(|h| h.insert_right(&e).map(Tensor::into_vec))
                    .collect::<Result<Vec<_>>>()?;
                parts.push(Tensor::covector(&self.directional(g, n, &vnorm, &dg))?);
            }
            Tensor::stack_deepest(&parts)
        } else {
            let dg: Vec<Vec<f64>> = d.into_iter().map(Tensor::into_vec).collect();
            Tensor::covector(&self.directional(g, n, &vnorm, &dg))
        }
    }

    fn label(&self) -> String {
        if self.spatial {
            format!("grad n_{}", self.i + 1)
        } else {
            format!("dt n_{}", self.i + 1)
        }
    }

    fn fd_depth(&self) -> usize {
        self.derivs
            .iter()
            .map(|f| f.fd_depth())
            .max()
            .unwrap_or(0)
            .max(frame_depth(&self.geom))
    }

    fn is_static(&self) -> bool {
        frame_static(&self.geom) && self.derivs.iter().all(|f| f.is_static())
    }
}

struct ProjectorNode {
    geom: Geom,
    normal_part: bool,
}

impl FieldNode for ProjectorNode {
    fn shape(&self) -> TensorShape {
        TensorShape {
            dim: self.geom.dim(),
            rank: 2,
        }
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        let frame = self.geom.frame_at(x, t)?;
        Ok(if self.normal_part {
            frame.n().clone()
        } else {
            frame.p().clone()
        })
    }

    fn label(&self) -> String {
        if self.normal_part { "N" } else { "P" }.into()
    }

    fn fd_depth(&self) -> usize {
        frame_depth(&self.geom)
    }

    fn is_static(&self) -> bool {
        frame_static(&self.geom)
    }

    fn analytic_gradient(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        Ok(Some(eng.gradient(&projector_expression(&self.geom, self.normal_part)?)?))
    }

    fn analytic_time_derivative(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        Ok(Some(eng.time_derivative(&projector_expression(&self.geom, self.normal_part)?)?))
    }
}
