use std::f64::consts::PI;

use rand::Rng;

use crate::applications::sample_points;
use crate::differential::{covariant_gradient, divergence, mean_curvature, project, shape_operator, submanifold_gradient, FdMode};
use crate::field::TensorField;
use crate::geometry::{self, Geometry};
use crate::samples::{random_quadratic_field, random_sphere_point};
use crate::tensor::dot;
use crate::verify::{Check, Ctx, Outcome, Worst};

use super::{targets, tol};

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Worst relative error of `κ` against `expected(x)` with magnitude `scale`.
fn curvature_error(geom: &Geometry, points: &[Vec<f64>], scale: f64, expected: impl Fn(&[f64]) -> Vec<f64>, w: &mut Worst) -> crate::Result<()> {
    let kappa = mean_curvature(geom)?;
    for x in points {
        w.push(&kappa.eval_vector(x, 0.0)?, &expected(x), scale);
    }
    Ok(())
}

fn circle_points(cx: &Ctx, r: f64, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = cx.rng();
    (0..16)
        .map(|_| {
            let a: f64 = rng.gen_range(0.0..2.0 * PI);
            let mut x = vec![r * a.cos(), r * a.sin()];
            x.resize(dim, 0.0);
            x
        })
        .collect()
}

pub(super) fn identities(selected: Option<&str>, mode: FdMode) -> Vec<Check> {
    let curv_tol = tol(mode, 1e-5, 1e-9);
    let mut out = vec![
        Check::new("differential.sphere.mean_curvature", "κ = (2/R) n on spheres of radius R and 2R", Some("sphere"), curv_tol, |cx| {
            let r0 = cx.params("sphere")?["R"];
            let mut rng = cx.rng();
            let mut w = Worst::new();
            for r in [r0, 2.0 * r0] {
                let g = geometry::sphere(r, cx.engine())?;
                let pts: Vec<Vec<f64>> = (0..16).map(|_| random_sphere_point(&mut rng, 3, r)).collect();
                curvature_error(&g, &pts, 2.0 / r, |x| x.iter().map(|c| 2.0 * c / (r * r)).collect(), &mut w)?;
            }
            Ok(w.finish())
        })
        .rel(),
    ];
    for (name, dim) in [("circle3d", 3), ("circle2d", 2)] {
        out.push(
            Check::new(format!("differential.{name}.mean_curvature"), "κ = x / R² on a circle of radius R", Some(name), curv_tol, move |cx| {
                let s = cx.setup(name)?;
                let r = s.param("R");
                let mut w = Worst::new();
                curvature_error(&s.geometry, &circle_points(cx, r, dim), 1.0 / r, |x| x.iter().map(|c| c / (r * r)).collect(), &mut w)?;
                Ok(w.finish())
            })
            .rel(),
        );
    }
    out.push(
        Check::new("differential.sphere.coordinate_gradients", "∇_M x_j is the j-th row of P", Some("sphere"), tol(mode, 1e-5, 1e-9), |cx| {
            let s = cx.setup("sphere")?;
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 12) {
                let frame = s.geometry.frame_at(&x, 0.0)?;
                for j in 0..3 {
                    let g = submanifold_gradient(&s.geometry, &TensorField::coordinate(3, j)?)?.eval(&x, 0.0)?;
                    w.push(g.as_slice(), frame.p().row_component(j)?.as_slice(), 1.0);
                }
            }
            Ok(w.finish())
        }),
    );
    out.push(Check::new(
        "differential.sphere.shape_operator",
        "ℙB = P / R for the outward normal of a sphere",
        Some("sphere"),
        tol(mode, 1e-5, 1e-9),
        |cx| {
            let s = cx.setup("sphere")?;
            let r = s.param("R");
            let b = shape_operator(&s.geometry, 0)?;
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 12) {
                let frame = s.geometry.frame_at(&x, 0.0)?;
                let pb = frame.project(&b.eval(&x, 0.0)?)?;
                w.push(pb.as_slice(), frame.p().scale(1.0 / r).as_slice(), 1.0);
            }
            Ok(w.finish())
        },
    ));
    out.push(Check::new(
        "differential.sphere.gradient_decomposition",
        "∇_M u = ∇^cov u − n ⊗ B(u) for tangential u",
        Some("sphere"),
        tol(mode, 1e-4, 1e-8),
        |cx| {
            let s = cx.setup("sphere")?;
            let g = &s.geometry;
            let mut rng = cx.rng();
            let u = project(g, &random_quadratic_field(&mut rng, 3, 1, 1.0)?)?;
            let (gm, cov, b, n) = (submanifold_gradient(g, &u)?, covariant_gradient(g, &u)?, shape_operator(g, 0)?, g.normal_field(0)?);
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 8) {
                let bu = b.eval(&x, 0.0)?.insert_left(&u.eval_vector(&x, 0.0)?)?;
                let recon = cov.eval(&x, 0.0)?.sub(&n.eval(&x, 0.0)?.outer(&bu)?)?;
                w.push(gm.eval(&x, 0.0)?.as_slice(), recon.as_slice(), 1.0);
            }
            Ok(w.finish())
        },
    ));
    out.push(Check::new(
        "differential.sphere.metric_compatibility",
        "∇^cov(u·v)·w = (∇^cov u·w)·v + (∇^cov v·w)·u",
        Some("sphere"),
        tol(mode, 1e-4, 1e-8),
        |cx| {
            let s = cx.setup("sphere")?;
            let g = &s.geometry;
            let mut rng = cx.rng();
            let mut f = || -> crate::Result<TensorField> { project(g, &random_quadratic_field(&mut rng, 3, 1, 1.0)?) };
            let (u, v, wf) = (f()?, f()?, f()?);
            let (cu, cv, cuv) = (covariant_gradient(g, &u)?, covariant_gradient(g, &v)?, covariant_gradient(g, &u.frobenius(&v)?)?);
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 8) {
                let (ux, vx, wx) = (u.eval_vector(&x, 0.0)?, v.eval_vector(&x, 0.0)?, wf.eval_vector(&x, 0.0)?);
                let lhs = cuv.eval(&x, 0.0)?.insert_right(&wx)?.value();
                let rhs = dot(&cu.eval(&x, 0.0)?.insert_right(&wx)?.into_vec(), &vx) + dot(&cv.eval(&x, 0.0)?.insert_right(&wx)?.into_vec(), &ux);
                w.push(&[lhs], &[rhs], 1.0);
            }
            Ok(w.finish())
        },
    ));

    for g in targets(selected, &["sphere", "torus", "plane_disk", "circle3d", "helix_segment"], |_| true) {
        out.push(Check::new(
            format!("differential.{g}.gradient_tangential"),
            "∇_M T · n_i = 0",
            Some(g),
            1e-10,
            move |cx| {
                let s = cx.setup(g)?;
                let n = s.geometry.dim();
                let f = random_quadratic_field(&mut cx.rng(), n, 2, 1.0)?;
                let gm = submanifold_gradient(&s.geometry, &f)?;
                let mut worst: f64 = 0.0;
                for x in sample_points(&s.atlas, 8) {
                    let frame = s.geometry.frame_at(&x, s.time())?;
                    let v = gm.eval(&x, s.time())?;
                    for normal in &frame.normals {
                        worst = worst.max(v.insert_right(normal)?.norm() / v.norm().max(1.0));
                    }
                }
                Ok(Outcome::max_error(worst))
            },
        ));
        out.push(Check::new(
            format!("differential.{g}.row_commutation"),
            "∇_M(T^k) = (∇_M T)^k",
            Some(g),
            1e-9,
            move |cx| {
                let s = cx.setup(g)?;
                let n = s.geometry.dim();
                let f = random_quadratic_field(&mut cx.rng(), n, 2, 1.0)?;
                let gm = submanifold_gradient(&s.geometry, &f)?;
                let rows = (0..n)
                    .map(|k| submanifold_gradient(&s.geometry, &f.row_component(k)?))
                    .collect::<crate::Result<Vec<_>>>()?;
                let mut w = Worst::new();
                for x in sample_points(&s.atlas, 6) {
                    let v = gm.eval(&x, s.time())?;
                    for (k, r) in rows.iter().enumerate() {
                        w.push(r.eval(&x, s.time())?.as_slice(), v.row_component(k)?.as_slice(), 1.0);
                    }
                }
                Ok(w.finish())
            },
        ));
        out.push(Check::new(
            format!("differential.{g}.divergence_of_position"),
            "Div_M x = dim M",
            Some(g),
            tol(mode, 1e-7, 1e-10),
            move |cx| {
                let s = cx.setup(g)?;
                let d = divergence(&s.geometry, &TensorField::position(s.geometry.dim())?)?;
                let m = s.geometry.manifold_dim() as f64;
                let mut w = Worst::new();
                for x in sample_points(&s.atlas, 8) {
                    w.push(&[d.eval_scalar(&x, s.time())?], &[m], 1.0);
                }
                Ok(w.finish())
            },
        ));
        out.push(Check::new(
            format!("differential.{g}.product_rule"),
            "Div_M(f u) = f Div_M u + ∇_M f · u",
            Some(g),
            tol(mode, 1e-6, 1e-9),
            move |cx| {
                let s = cx.setup(g)?;
                let geom = &s.geometry;
                let n = geom.dim();
                let mut rng = cx.rng();
                let f = random_quadratic_field(&mut rng, n, 0, 1.0)?;
                let u = random_quadratic_field(&mut rng, n, 1, 1.0)?;
                let lhs = divergence(geom, &u.times(&f)?)?;
                let (du, gf) = (divergence(geom, &u)?, submanifold_gradient(geom, &f)?);
                let mut w = Worst::new();
                for x in sample_points(&s.atlas, 8) {
                    let t = s.time();
                    let rhs = f.eval_scalar(&x, t)? * du.eval_scalar(&x, t)? + dot(&gf.eval_vector(&x, t)?, &u.eval_vector(&x, t)?);
                    w.push(&[lhs.eval_scalar(&x, t)?], &[rhs], 1.0);
                }
                Ok(w.finish())
            },
        ));
        out.push(Check::new(
            format!("differential.{g}.curvature_is_normal"),
            "ℙκ = 0",
            Some(g),
            tol(mode, 1e-6, 1e-9),
            move |cx| {
                let s = cx.setup(g)?;
                let kappa = mean_curvature(&s.geometry)?;
                let mut worst: f64 = 0.0;
                for x in sample_points(&s.atlas, 8) {
                    let frame = s.geometry.frame_at(&x, s.time())?;
                    worst = worst.max(max_abs(&frame.project_vector(&kappa.eval_vector(&x, s.time())?)));
                }
                Ok(Outcome::max_error(worst))
            },
        ));
    }
    out
}
