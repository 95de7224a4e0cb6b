use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{dot, norm2, unit_vector, Tensor};

/// Pointwise normals and projectors of a level-set submanifold.
#[derive(Debug, Clone)]
pub struct GeometryFrame {
    pub point: Vec<f64>,
    pub time: f64,
    /// Orthonormal normals in the listed order of the level functions.
    pub normals: Vec<Vec<f64>>,
    /// Gradients of the level functions before orthonormalization.
    pub raw_gradients: Vec<Vec<f64>>,
    n: Tensor,
    p: Tensor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentBasis2D {
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
}

/// Determinant of the square matrix whose columns are `cols`.
pub fn determinant(cols: &[&[f64]]) -> f64 {
    let n = cols.len();
    let m = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
    m.determinant()
}

impl GeometryFrame {
    pub fn new(point: Vec<f64>, time: f64, normals: Vec<Vec<f64>>, raw_gradients: Vec<Vec<f64>>) -> Result<Self> {
        let dim = point.len();
        let mut n = Tensor::zeros(dim, 2)?;
        for ni in &normals {
            let c = Tensor::covector(ni)?;
            n.add_assign_scaled(1.0, &c.outer(&c)?)?;
        }
        let p = Tensor::identity(dim)?.sub(&n)?;
        Ok(Self {
            point,
            time,
            normals,
            raw_gradients,
            n,
            p,
        })
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn codim(&self) -> usize {
        self.normals.len()
    }

    /// Normal projector `N`.
    pub fn n(&self) -> &Tensor {
        &self.n
    }

    /// Tangential projector `P`.
    pub fn p(&self) -> &Tensor {
        &self.p
    }

    pub fn project_vector(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        for n in &self.normals {
            let c = dot(v, n);
            for (o, nk) in out.iter_mut().zip(n) {
                *o -= c * nk;
            }
        }
        out
    }

    /// Tangential projection `ℙT`: project the row components, then remove
    /// `sum_i n_i ⊗ T̃(n_i)`.
    pub fn project(&self, t: &Tensor) -> Result<Tensor> {
        if t.dim() != self.dim() {
            return Err(Error::ShapeMismatch {
                op: "project",
                left: self.p.shape(),
                right: t.shape(),
            });
        }
        if t.rank() == 0 {
            return Ok(t.clone());
        }
        let rows = t
            .rows()?
            .iter()
            .map(|r| self.project(r))
            .collect::<Result<Vec<_>>>()?;
        let mut tilde = Tensor::from_rows(&rows)?;
        let mut correction = Tensor::zeros(t.dim(), t.rank())?;
        for n in &self.normals {
            let inserted = tilde.insert_left(n)?;
            correction.add_assign_scaled(1.0, &Tensor::covector(n)?.outer(&inserted)?)?;
        }
        tilde.add_assign_scaled(-1.0, &correction)?;
        Ok(tilde)
    }

    /// `‖ℙT − T‖ ≤ tol · max(1, ‖T‖)`.
    pub fn is_tangent(&self, t: &Tensor, tol: f64) -> Result<bool> {
        Ok(self.project(t)?.distance(t)? <= tol * t.norm().max(1.0))
    }

    fn require_surface(&self, op: &'static str) -> Result<()> {
        let p = self.dim() - self.codim();
        if p != 2 {
            return Err(Error::WrongCodimension { op, dim: p });
        }
        Ok(())
    }

    /// Positively oriented orthonormal tangent pair.
    pub fn tangent_basis_2d(&self) -> Result<TangentBasis2D> {
        self.require_surface("tangent_basis_2d")?;
        let n = self.dim();
        let mut axes: Vec<(f64, usize)> = (0..n)
            .map(|k| {
                let e = unit_vector(n, k);
                let normal_part: f64 = self.normals.iter().map(|ni| dot(&e, ni).powi(2)).sum();
                (normal_part, k)
            })
            .collect();
        axes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for &(_, k) in &axes {
            let mut v = self.project_vector(&unit_vector(n, k));
            for b in &basis {
                let c = dot(&v, b);
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk -= c * bk;
                }
            }
            let len = norm2(&v);
            if len > 1e-6 {
                basis.push(v.into_iter().map(|c| c / len).collect());
            }
            if basis.len() == 2 {
                break;
            }
        }
        if basis.len() < 2 {
            return Err(Error::Degenerate("tangent plane could not be spanned".into()));
        }
        let t2 = basis.pop().unwrap_or_default();
        let t1 = basis.pop().unwrap_or_default();
        let mut cols: Vec<&[f64]> = vec![&t1, &t2];
        cols.extend(self.normals.iter().map(|v| v.as_slice()));
        let t2 = if determinant(&cols) < 0.0 {
            t2.iter().map(|c| -c).collect()
        } else {
            t2
        };
        Ok(TangentBasis2D { t1, t2 })
    }

    /// `D_ab = det[e_a, e_b, n_1, ..., n_m]`, so that `u† = D(u)`.
    pub fn dagger_tensor(&self) -> Result<Tensor> {
        self.require_surface("dagger")?;
        let cols: Vec<&[f64]> = self.normals.iter().map(|v| v.as_slice()).collect();
        dagger_from_normals(&cols)
    }

    /// Rotation of `Pu` by a quarter turn in the oriented tangent plane.
    pub fn dagger(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.dagger_tensor()?.insert_left(u)?.into_vec())
    }
}

pub(crate) fn dagger_from_normals(cols: &[&[f64]]) -> Result<Tensor> {
    let first = cols
        .first()
        .ok_or_else(|| Error::InvalidShape("dagger needs at least one normal".into()))?;
    let n = first.len();
    Tensor::from_fn(n, 2, |idx| {
        if idx[0] == idx[1] {
            return 0.0;
        }
        let ea = unit_vector(n, idx[0]);
        let eb = unit_vector(n, idx[1]);
        let mut all: Vec<&[f64]> = vec![&ea, &eb];
        all.extend(cols.iter().copied());
        determinant(&all)
    })
}
