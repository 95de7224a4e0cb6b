use std::f64::consts::PI;

use crate::applications::sample_points;
use crate::differential::{curl as curl_field, curl_up, divergence, laplacian_covariant, laplacian_extrinsic, project, submanifold_gradient, FdMode};
use crate::field::TensorField;
use crate::integration::{
    circulation_residual, gradient_stokes_residual, integration_by_parts_residual, path_ftc_residual, stokes_residual, weak_form_eval,
};
use crate::registry::Setup;
use crate::samples::{random_quadratic_field, rotation_field};
use crate::tensor::Tensor;
use crate::verify::{Check, Ctx, Outcome, Worst};

use super::{targets, tol};

const TWO_DIMENSIONAL: [&str; 7] = ["sphere", "hemisphere", "plane_disk", "torus", "torus_patch", "expanding_sphere", "rotating_plane"];

fn ez() -> crate::Result<TensorField> {
    Ok(TensorField::constant(Tensor::covector(&[0.0, 0.0, 1.0])?))
}

pub(super) fn stokes(selected: Option<&str>) -> Vec<Check> {
    let mut out = vec![
        Check::new("stokes.hemisphere.ez_boundary", "boundary term ∫_∂M e_z·t = −2πR", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let r = s.param("R");
            let st = stokes_residual(&s.atlas, &ez()?)?;
            Ok(Outcome::scalars(st.boundary.value(), -2.0 * PI * r))
        })
        .rel(),
        Check::new("stokes.hemisphere.ez_curvature", "curvature term ∫ e_z·κ = 2πR", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let r = s.param("R");
            let st = stokes_residual(&s.atlas, &ez()?)?;
            Ok(Outcome::scalars(st.curvature.value(), 2.0 * PI * r))
        })
        .rel(),
        Check::new("stokes.hemisphere.ez_total", "∫ Div_M e_z = ∫_∂M e_z·t + ∫ e_z·κ", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            Ok(Outcome::residual(&stokes_residual(&s.atlas, &ez()?)?.residual))
        }),
        Check::new("stokes.hemisphere.height_gradient", "∫ ∇_M z = ∫_∂M z t + ∫ z κ", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            Ok(Outcome::residual(&gradient_stokes_residual(&s.atlas, &TensorField::coordinate(3, 2)?)?.residual))
        }),
        Check::new("stokes.hemisphere.integration_by_parts", "∫ S:Div_M T + ∫ T:∇_M S = ∫_∂M (S:T)·t + ∫ (S:T)·κ", Some("hemisphere"), 1e-5, |cx| {
            let s = cx.setup("hemisphere")?;
            let mut rng = cx.rng();
            let a = random_quadratic_field(&mut rng, 3, 1, 1.0)?;
            let b = random_quadratic_field(&mut rng, 3, 2, 1.0)?;
            Ok(Outcome::residual(&integration_by_parts_residual(&s.atlas, &a, &b)?))
        }),
        Check::new("stokes.sphere.constant_tensor", "∫ Div_M C = ∫ C·κ = 0 on a closed sphere", Some("sphere"), 1e-6, |cx| {
            let s = cx.setup("sphere")?;
            let c = TensorField::constant(Tensor::from_matrix(&[vec![1.0, 2.0, 0.5], vec![0.0, -1.0, 3.0], vec![2.0, 1.0, 1.0]])?);
            Ok(Outcome::residual(&stokes_residual(&s.atlas, &c)?.residual))
        }),
        Check::new("stokes.helix_segment.path_ftc", "∫_γ ∇_M T · w = T(end) − T(start), ranks 0 to 2", Some("helix_segment"), 1e-6, |cx| {
            let s = cx.setup("helix_segment")?;
            let mut rng = cx.rng();
            let mut w = Worst::new();
            for rank in 0..3 {
                let r = path_ftc_residual(&s.atlas, &random_quadratic_field(&mut rng, 3, rank, 1.0)?)?;
                w.push(r.lhs.as_slice(), r.rhs.as_slice(), 1.0);
            }
            Ok(w.finish())
        }),
        Check::new("stokes.plane_disk.circulation", "∫ Curl_Γ u = ∮ u·τ for u = (−y, x, 0)", Some("plane_disk"), 1e-6, |cx| {
            let s = cx.setup("plane_disk")?;
            Ok(Outcome::residual(&circulation_residual(&s.atlas, &rotation_field([0.0, 0.0, 1.0], 1.0)?)?))
        }),
    ];
    let defaults = ["hemisphere", "plane_disk", "torus_patch", "helix_segment", "sphere", "torus", "circle3d"];
    for g in targets(selected, &defaults, |_| true) {
        out.push(Check::new(
            format!("stokes.{g}.random_rank1"),
            "∫ Div_M u = ∫_∂M u·t + ∫ u·κ for a random quadratic u",
            Some(g),
            1e-6,
            move |cx| {
                let s = cx.setup(g)?;
                let u = random_quadratic_field(&mut cx.rng(), s.geometry.dim(), 1, 1.0)?;
                Ok(Outcome::residual(&stokes_residual(&s.atlas, &u)?.residual))
            },
        ));
        out.push(Check::new(
            format!("stokes.{g}.random_gradient"),
            "∫ ∇_M f = ∫_∂M f t + ∫ f κ for a random quadratic f",
            Some(g),
            1e-6,
            move |cx| {
                let s = cx.setup(g)?;
                let f = random_quadratic_field(&mut cx.rng(), s.geometry.dim(), 0, 1.0)?;
                Ok(Outcome::residual(&gradient_stokes_residual(&s.atlas, &f)?.residual))
            },
        ));
    }
    out
}

pub(super) fn curl(selected: Option<&str>, mode: FdMode) -> Vec<Check> {
    let pointwise = tol(mode, 1e-8, 1e-12);
    let mut out = vec![
        Check::new("curl.plane_disk.rotation_curl", "curl_Γ(−y, x, 0) = 2 on the plane z = 0", Some("plane_disk"), pointwise, |cx| {
            let s = cx.setup("plane_disk")?;
            let c = curl_field(&s.geometry, &rotation_field([0.0, 0.0, 1.0], 1.0)?)?;
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 16) {
                w.push(&[c.eval_scalar(&x, 0.0)?], &[2.0], 1.0);
            }
            Ok(w.finish())
        }),
        Check::new("curl.plane_disk.constant_field", "curl_Γ of a constant field vanishes", Some("plane_disk"), pointwise, |cx| {
            let s = cx.setup("plane_disk")?;
            let c = curl_field(&s.geometry, &TensorField::constant(Tensor::covector(&[0.3, -0.4, 0.7])?))?;
            let mut worst: f64 = 0.0;
            for x in sample_points(&s.atlas, 16) {
                worst = worst.max(c.eval_scalar(&x, 0.0)?.abs());
            }
            Ok(Outcome::max_error(worst))
        }),
        Check::new("curl.plane_disk.circulation", "∫ curl_Γ u = ∮ u·τ = 2πR² for u = (−y, x, 0)", Some("plane_disk"), 1e-6, |cx| {
            let s = cx.setup("plane_disk")?;
            let r = s.param("R");
            let res = circulation_residual(&s.atlas, &rotation_field([0.0, 0.0, 1.0], 1.0)?)?;
            Ok(Outcome::vectors(vec![res.lhs.value(), res.rhs.value()], vec![2.0 * PI * r * r; 2]))
        })
        .rel(),
        Check::new("curl.hemisphere.gradient_circulation", "∮ ∇_M f·τ = ∫ curl_Γ ∇_M f = 0", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let f = TensorField::static_scalar(3, |x| x[0] * x[1] + x[2] * x[2] * x[0])?;
            let res = circulation_residual(&s.atlas, &submanifold_gradient(&s.geometry, &f)?)?;
            Ok(Outcome::vectors(vec![res.lhs.value(), res.rhs.value()], vec![0.0, 0.0]))
        }),
        Check::new("curl.hemisphere.rank2_circulation", "∫ Curl_Γ T = ∮ T·τ for a random rank-2 T", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let t = random_quadratic_field(&mut cx.rng(), 3, 2, 1.0)?;
            Ok(Outcome::residual(&circulation_residual(&s.atlas, &t)?))
        }),
    ];
    for g in targets(selected, &["plane_disk", "hemisphere"], |i| TWO_DIMENSIONAL.contains(&i.name)) {
        out.push(Check::new(
            format!("curl.{g}.curl_of_gradient"),
            "Curl_Γ ∇_M T = 0, ranks 0 and 1",
            Some(g),
            tol(mode, 1e-5, 1e-8),
            move |cx| {
                let s = cx.setup(g)?;
                let mut rng = cx.rng();
                let mut worst: f64 = 0.0;
                for rank in 0..2 {
                    let t = random_quadratic_field(&mut rng, 3, rank, 1.0)?;
                    let c = curl_field(&s.geometry, &submanifold_gradient(&s.geometry, &t)?)?;
                    for x in sample_points(&s.atlas, 6) {
                        worst = worst.max(c.eval(&x, s.time())?.norm());
                    }
                }
                Ok(Outcome::max_error(worst))
            },
        ));
        out.push(Check::new(
            format!("curl.{g}.divergence_of_curl"),
            "Div_M 𝐂𝐮𝐫𝐥_Γ T = 0, ranks 0 and 1",
            Some(g),
            tol(mode, 1e-5, 1e-8),
            move |cx| {
                let s = cx.setup(g)?;
                let mut rng = cx.rng();
                let mut worst: f64 = 0.0;
                for rank in 0..2 {
                    let t = random_quadratic_field(&mut rng, 3, rank, 1.0)?;
                    let d = divergence(&s.geometry, &curl_up(&s.geometry, &t)?)?;
                    for x in sample_points(&s.atlas, 6) {
                        worst = worst.max(d.eval(&x, s.time())?.norm());
                    }
                }
                Ok(Outcome::max_error(worst))
            },
        ));
    }
    out
}

/// Manufactured weak form: `f = −Δ^cov T` against a random tangential test field.
fn weak_form_outcome(cx: &Ctx, s: &Setup, t: TensorField) -> crate::Result<Outcome> {
    let g = &s.geometry;
    let f = laplacian_covariant(g, &t)?.scale(-1.0)?;
    let test = project(g, &random_quadratic_field(&mut cx.rng(), 3, 1, 1.0)?)?;
    let wf = weak_form_eval(&s.atlas, &t, &test, &f, None)?;
    Ok(Outcome::scalars(wf.bilinear, wf.linear))
}

pub(super) fn laplacian(selected: Option<&str>, mode: FdMode) -> Vec<Check> {
    let mut out = vec![
        Check::new("laplacian.sphere.coordinates", "Δ_M x_j = −(2/R²) x_j", Some("sphere"), 1e-4, |cx| {
            let s = cx.setup("sphere")?;
            let r = s.param("R");
            let mut w = Worst::new();
            for j in 0..3 {
                let l = laplacian_extrinsic(&s.geometry, &TensorField::coordinate(3, j)?)?;
                for x in sample_points(&s.atlas, 6) {
                    w.push(&[l.eval_scalar(&x, 0.0)?], &[-2.0 * x[j] / (r * r)], 2.0 / r);
                }
            }
            Ok(w.finish())
        })
        .rel(),
        Check::new("laplacian.sphere.rotation_field", "Δ^cov u = −u / R² for u = e_z × x", Some("sphere"), 1e-3, |cx| {
            let s = cx.setup("sphere")?;
            let r = s.param("R");
            let u = rotation_field([0.0, 0.0, 1.0], 1.0)?;
            let l = laplacian_covariant(&s.geometry, &u)?;
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 6) {
                let ux = u.eval_vector(&x, 0.0)?;
                let scale = ux.iter().map(|c| c * c).sum::<f64>().sqrt() / (r * r);
                if scale > 1e-3 {
                    let expect: Vec<f64> = ux.iter().map(|c| -c / (r * r)).collect();
                    w.push(&l.eval_vector(&x, 0.0)?, &expect, scale);
                }
            }
            Ok(w.finish())
        })
        .rel(),
        Check::new("laplacian.sphere.weak_form", "a^cov(T, S) = ℓ(S) for T = e_z × x, f = −Δ^cov T", Some("sphere"), 1e-4, |cx| {
            let s = cx.setup("sphere")?;
            weak_form_outcome(cx, &s, rotation_field([0.0, 0.0, 1.0], 1.0)?)
        }),
        Check::new(
            "laplacian.sphere.weak_form_projected",
            "a^cov(T, S) = ℓ(S) for T = ℙ(e_z × x), f = −Δ^cov T",
            Some("sphere"),
            tol(mode, 1e-3, 1e-9),
            |cx| {
                let s = cx.setup("sphere")?;
                let t = project(&s.geometry, &rotation_field([0.0, 0.0, 1.0], 1.0)?)?;
                weak_form_outcome(cx, &s, t)
            },
        )
        .rel(),
        Check::new("laplacian.plane_disk.quadratic", "Δ_M (x² + y²) = 4 on the plane", Some("plane_disk"), 1e-4, |cx| {
            let s = cx.setup("plane_disk")?;
            let l = laplacian_extrinsic(&s.geometry, &TensorField::static_scalar(3, |x| x[0] * x[0] + x[1] * x[1])?)?;
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 8) {
                w.push(&[l.eval_scalar(&x, 0.0)?], &[4.0], 4.0);
            }
            Ok(w.finish())
        })
        .rel(),
    ];
    for g in targets(selected, &["sphere", "torus"], |i| i.name != "circle2d") {
        out.push(Check::new(
            format!("laplacian.{g}.scalar_agreement"),
            "Δ^cov f = Δ_M f for scalar f",
            Some(g),
            tol(mode, 1e-4, 1e-7),
            move |cx| {
                let s = cx.setup(g)?;
                let f = random_quadratic_field(&mut cx.rng(), 3, 0, 1.0)?;
                let (a, b) = (laplacian_covariant(&s.geometry, &f)?, laplacian_extrinsic(&s.geometry, &f)?);
                let mut w = Worst::new();
                for x in sample_points(&s.atlas, 6) {
                    w.push(&[a.eval_scalar(&x, s.time())?], &[b.eval_scalar(&x, s.time())?], 1.0);
                }
                Ok(w.finish())
            },
        ));
    }
    out
}
