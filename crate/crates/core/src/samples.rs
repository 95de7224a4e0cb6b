//! Seeded random tensors and smooth test fields with exact derivatives.

use rand::Rng;

use crate::error::Result;
use crate::field::TensorField;
use crate::geometry::GeometryFrame;
use crate::tensor::{dot, norm2, Tensor};

pub fn random_tensor(rng: &mut impl Rng, dim: usize, rank: usize) -> Result<Tensor> {
    Tensor::from_fn(dim, rank, |_| rng.gen_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Uniformly distributed point on the sphere of the given radius.
pub fn random_sphere_point(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let v = random_vector(rng, dim);
        let s = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if s > 0.1 && s <= 1.0 {
            return v.iter().map(|c| radius * c / s).collect();
        }
    }
}

/// Every leaf is `a + b·x + ½ xᵀ C x` with random coefficients in `[-scale, scale]`;
/// gradient and Hessian are exact.
pub fn random_quadratic_field(rng: &mut impl Rng, dim: usize, rank: usize, scale: f64) -> Result<TensorField> {
    let leaves = dim.pow(rank as u32);
    let mut a = Vec::with_capacity(leaves);
    let mut b = Vec::with_capacity(leaves);
    let mut c = Vec::with_capacity(leaves);
    for _ in 0..leaves {
        a.push(scale * rng.gen_range(-1.0..1.0));
        b.push((0..dim).map(|_| scale * rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>());
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = scale * rng.gen_range(-1.0..1.0);
                m[i * dim + j] = v;
                m[j * dim + i] = v;
            }
        }
        c.push(m);
    }
    quadratic_field(dim, rank, a, b, c)
}

/// Field with leaves `a_L + b_L·x + ½ xᵀ C_L x` (`C_L` symmetric, row-major).
pub fn quadratic_field(dim: usize, rank: usize, a: Vec<f64>, b: Vec<Vec<f64>>, c: Vec<Vec<f64>>) -> Result<TensorField> {
    let hess_data: Vec<f64> = c.iter().flatten().copied().collect();
    let hess = TensorField::constant(Tensor::from_flat(dim, rank + 2, hess_data)?);
    let (b2, c2) = (b.clone(), c.clone());
    let grad = TensorField::builder(dim, rank + 1, move |x, _| {
        let mut out = Vec::with_capacity(b2.len() * dim);
        for (bl, cl) in b2.iter().zip(&c2) {
            for i in 0..dim {
                out.push(bl[i] + (0..dim).map(|j| cl[i * dim + j] * x[j]).sum::<f64>());
            }
        }
        out
    })
    .stationary()
    .gradient(hess)
    .label("quadratic'")
    .build()?;
    TensorField::builder(dim, rank, move |x, _| {
        a.iter()
            .zip(&b)
            .zip(&c)
            .map(|((al, bl), cl)| {
                let lin: f64 = bl.iter().zip(x).map(|(p, q)| p * q).sum();
                let quad: f64 = (0..dim)
                    .map(|i| (0..dim).map(|j| x[i] * cl[i * dim + j] * x[j]).sum::<f64>())
                    .sum();
                al + lin + 0.5 * quad
            })
            .collect()
    })
    .stationary()
    .gradient(grad)
    .label("quadratic")
    .build()
}

/// Rigid rotation `x ↦ ω axis × x` in R^3 with its exact constant gradient.
pub fn rotation_field(axis: [f64; 3], omega: f64) -> Result<TensorField> {
    let grad = Tensor::from_fn(3, 2, |ij| {
        let (i, j) = (ij[0], ij[1]);
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let c = [axis[1] * e[2] - axis[2] * e[1], axis[2] * e[0] - axis[0] * e[2], axis[0] * e[1] - axis[1] * e[0]];
        omega * c[i]
    })?;
    TensorField::builder(3, 1, move |x, _| {
        vec![
            omega * (axis[1] * x[2] - axis[2] * x[1]),
            omega * (axis[2] * x[0] - axis[0] * x[2]),
            omega * (axis[0] * x[1] - axis[1] * x[0]),
        ]
    })
    .stationary()
    .gradient(TensorField::constant(grad))
    .label("rotation")
    .build()
}

/// Frame at a random point of R^dim with `codim` random orthonormal normals.
pub fn random_frame(rng: &mut impl Rng, dim: usize, codim: usize) -> Result<GeometryFrame> {
    let mut normals: Vec<Vec<f64>> = Vec::with_capacity(codim);
    while normals.len() < codim {
        let mut v = random_vector(rng, dim);
        for n in &normals {
            let c = dot(&v, n);
            v.iter_mut().zip(n).for_each(|(a, b)| *a -= c * b);
        }
        let s = norm2(&v);
        if s > 0.1 {
            normals.push(v.into_iter().map(|c| c / s).collect());
        }
    }
    GeometryFrame::new(random_vector(rng, dim), 0.0, normals.clone(), normals)
}
