use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{circle2d, circle3d, expanding_sphere, plane_disk, rotating_plane, sphere};
use crate::samples::{random_quadratic_field, random_sphere_point};
use crate::tensor::{dot, Tensor};

const MODES: [(FdMode, f64); 2] = [(FdMode::Fd2, 1e-5), (FdMode::Analytic, 1e-9)];

fn vdist(a: &Tensor, b: &[f64]) -> f64 {
    a.as_slice().iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

fn rotation_field(axis: [f64; 3], omega: f64) -> TensorField {
    let grad = Tensor::from_fn(3, 2, |ij| {
        // ∂_j (ω axis × x)_i
        let (i, j) = (ij[0], ij[1]);
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let c = [axis[1] * e[2] - axis[2] * e[1], axis[2] * e[0] - axis[0] * e[2], axis[0] * e[1] - axis[1] * e[0]];
        omega * c[i]
    })
    .unwrap();
    TensorField::builder(3, 1, move |x, _| {
        vec![
            omega * (axis[1] * x[2] - axis[2] * x[1]),
            omega * (axis[2] * x[0] - axis[0] * x[2]),
            omega * (axis[0] * x[1] - axis[1] * x[0]),
        ]
    })
    .stationary()
    .gradient(TensorField::constant(grad))
    .build()
    .unwrap()
}

#[test]
fn submanifold_gradient_examples() {
    for (mode, tol) in MODES {
        let g = sphere(1.0, EngineConfig::new(mode)).unwrap();
        let z = TensorField::coordinate(3, 2).unwrap();
        let gz = submanifold_gradient(&g, &z).unwrap();
        assert!(gz.eval(&[0.0, 0.0, 1.0], 0.0).unwrap().norm() < tol);
        let x = [0.6, 0.0, 0.8];
        let frame = g.frame_at(&x, 0.0).unwrap();
        for j in 0..3 {
            let gj = submanifold_gradient(&g, &TensorField::coordinate(3, j).unwrap()).unwrap();
            let v = gj.eval(&x, 0.0).unwrap();
            assert!(v.distance(&frame.p().row_component(j).unwrap()).unwrap() < tol);
        }
    }
}

#[test]
fn submanifold_gradient_is_tangential() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = sphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let f = random_quadratic_field(&mut rng, 3, 2, 1.0).unwrap();
    let gm = submanifold_gradient(&g, &f).unwrap();
    for _ in 0..10 {
        let x = random_sphere_point(&mut rng, 3, 1.0);
        let frame = g.frame_at(&x, 0.0).unwrap();
        let v = gm.eval(&x, 0.0).unwrap();
        assert!(v.insert_right(&frame.normals[0]).unwrap().norm() < 1e-8);
        // row components commute with the submanifold gradient
        let row = submanifold_gradient(&g, &f.row_component(1).unwrap()).unwrap();
        assert!(row.eval(&x, 0.0).unwrap().distance(&v.row_component(1).unwrap()).unwrap() < 1e-9);
    }
}

#[test]
fn divergence_examples() {
    for (mode, tol) in MODES {
        let g = sphere(1.0, EngineConfig::new(mode)).unwrap();
        let r = TensorField::position(3).unwrap();
        let d = divergence(&g, &r).unwrap();
        assert!((d.eval_scalar(&[0.0, 0.6, 0.8], 0.0).unwrap() - 2.0).abs() < tol);
        let ez = TensorField::constant(Tensor::covector(&[0.0, 0.0, 1.0]).unwrap());
        assert!(divergence(&g, &ez).unwrap().eval_scalar(&[0.0, 0.6, 0.8], 0.0).unwrap().abs() < tol);
    }
}

#[test]
fn mean_curvature_examples() {
    for (mode, tol) in [(FdMode::Fd2, 1e-6), (FdMode::Analytic, 1e-10)] {
        let g = sphere(2.0, EngineConfig::new(mode)).unwrap();
        let k = mean_curvature(&g).unwrap().eval(&[2.0, 0.0, 0.0], 0.0).unwrap();
        assert!(vdist(&k, &[1.0, 0.0, 0.0]) < tol);

        let c = circle2d(0.5, EngineConfig::new(mode)).unwrap();
        let k = mean_curvature(&c).unwrap().eval(&[0.3, 0.4], 0.0).unwrap();
        assert!(vdist(&k, &[0.3 / 0.25, 0.4 / 0.25]) < 4.0 * tol);

        let c3 = circle3d(2.0, EngineConfig::new(mode)).unwrap();
        let x = [2.0 * 0.6, 2.0 * 0.8, 0.0];
        let k = mean_curvature(&c3).unwrap().eval(&x, 0.0).unwrap();
        assert!(vdist(&k, &[0.3, 0.4, 0.0]) < tol);
    }
}

#[test]
fn rotation_curl_on_plane() {
    for (mode, tol) in [(FdMode::Fd2, 1e-8), (FdMode::Analytic, 1e-12)] {
        let g = plane_disk(1.0, EngineConfig::new(mode)).unwrap();
        let u = rotation_field([0.0, 0.0, 1.0], 1.0);
        let c = curl(&g, &u).unwrap();
        for x in [[0.1, 0.2, 0.0], [-0.5, 0.3, 0.0]] {
            assert!((c.eval_scalar(&x, 0.0).unwrap() - 2.0).abs() < tol);
        }
        let k = TensorField::constant(Tensor::covector(&[0.3, -0.4, 0.0]).unwrap());
        assert!(curl(&g, &k).unwrap().eval_scalar(&[0.1, 0.1, 0.0], 0.0).unwrap().abs() < tol);
    }
}

#[test]
fn curl_of_gradient_and_divergence_of_curl_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for rank in 0..2 {
        for (mode, tol) in MODES {
            let g = plane_disk(1.0, EngineConfig::new(mode)).unwrap();
            let t = random_quadratic_field(&mut rng, 3, rank, 1.0).unwrap();
            let a = curl(&g, &submanifold_gradient(&g, &t).unwrap()).unwrap();
            let b = divergence(&g, &curl_up(&g, &t).unwrap()).unwrap();
            let x = [0.2, -0.3, 0.0];
            assert!(a.eval(&x, 0.0).unwrap().norm() < tol);
            assert!(b.eval(&x, 0.0).unwrap().norm() < tol);
        }
    }
}

#[test]
fn covariant_gradient_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (mode, tol) in MODES {
        let g = sphere(1.0, EngineConfig::new(mode)).unwrap();
        let u = project(&g, &random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap()).unwrap();
        let v = project(&g, &random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap()).unwrap();
        let w = project(&g, &random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap()).unwrap();
        let cu = covariant_gradient(&g, &u).unwrap();
        let cv = covariant_gradient(&g, &v).unwrap();
        let cuv = covariant_gradient(&g, &u.frobenius(&v).unwrap()).unwrap();
        let f = TensorField::coordinate(3, 0).unwrap();
        let x = random_sphere_point(&mut rng, 3, 1.0);
        let frame = g.frame_at(&x, 0.0).unwrap();
        let cu_x = cu.eval(&x, 0.0).unwrap();
        assert!(cu_x.insert_right(&frame.normals[0]).unwrap().norm() < tol);
        assert!(frame.is_tangent(&cu_x, tol).unwrap());
        let (ux, vx, wx) = (u.eval_vector(&x, 0.0).unwrap(), v.eval_vector(&x, 0.0).unwrap(), w.eval_vector(&x, 0.0).unwrap());
        let lhs = cuv.eval(&x, 0.0).unwrap().insert_right(&wx).unwrap().value();
        let rhs = dot(&cu_x.insert_right(&wx).unwrap().into_vec(), &vx)
            + dot(&cv.eval(&x, 0.0).unwrap().insert_right(&wx).unwrap().into_vec(), &ux);
        assert!((lhs - rhs).abs() < 10.0 * tol);
        let a = covariant_gradient(&g, &f).unwrap().eval(&x, 0.0).unwrap();
        let b = submanifold_gradient(&g, &f).unwrap().eval(&x, 0.0).unwrap();
        assert!(a.distance(&b).unwrap() < tol);
    }
}

#[test]
fn laplacian_examples() {
    let g = sphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let x = [0.48, 0.6, 0.64];
    for j in 0..3 {
        let l = laplacian_extrinsic(&g, &TensorField::coordinate(3, j).unwrap()).unwrap();
        let v = l.eval_scalar(&x, 0.0).unwrap();
        assert!((v + 2.0 * x[j]).abs() < 1e-4, "{v}");
    }
    let p = plane_disk(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let f = TensorField::static_scalar(3, |x| x[0] * x[0] + x[1] * x[1]).unwrap();
    let v = laplacian_extrinsic(&p, &f).unwrap().eval_scalar(&[0.2, 0.1, 0.0], 0.0).unwrap();
    assert!((v - 4.0).abs() < 1e-4);
    let c = TensorField::constant(Tensor::scalar(3, 2.0).unwrap());
    assert_eq!(laplacian_extrinsic(&p, &c).unwrap().eval_scalar(&[0.2, 0.1, 0.0], 0.0).unwrap(), 0.0);
}

#[test]
fn covariant_laplacian_of_rotation_field() {
    for mode in [FdMode::Fd2, FdMode::Analytic] {
        let g = sphere(1.0, EngineConfig::new(mode)).unwrap();
        let u = rotation_field([0.0, 0.0, 1.0], 1.0);
        let l = laplacian_covariant(&g, &u).unwrap();
        let x = [0.48, 0.6, 0.64];
        let v = l.eval(&x, 0.0).unwrap();
        let ux = u.eval(&x, 0.0).unwrap();
        assert!(v.add(&ux).unwrap().norm() < 1e-3 * ux.norm(), "{mode}: {v:?}");
        let s = laplacian_covariant(&g, &TensorField::coordinate(3, 2).unwrap()).unwrap();
        let e = laplacian_extrinsic(&g, &TensorField::coordinate(3, 2).unwrap()).unwrap();
        assert!((s.eval_scalar(&x, 0.0).unwrap() - e.eval_scalar(&x, 0.0).unwrap()).abs() < 1e-4);
    }
}

#[test]
fn shape_operator_of_sphere() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (mode, tol) in MODES {
        let g = sphere(2.0, EngineConfig::new(mode)).unwrap();
        let b = shape_operator(&g, 0).unwrap();
        let u = project(&g, &random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap()).unwrap();
        let gm = submanifold_gradient(&g, &u).unwrap();
        let cov = covariant_gradient(&g, &u).unwrap();
        let n = g.normal_field(0).unwrap();
        let x = random_sphere_point(&mut rng, 3, 2.0);
        let frame = g.frame_at(&x, 0.0).unwrap();
        let bx = b.eval(&x, 0.0).unwrap();
        assert!(frame.project(&bx).unwrap().distance(&frame.p().scale(0.5)).unwrap() < tol);
        // ∇_M u = ∇^cov u − n ⊗ B(u)
        let bu = bx.insert_left(&u.eval_vector(&x, 0.0).unwrap()).unwrap();
        let recon = cov.eval(&x, 0.0).unwrap().sub(&n.eval(&x, 0.0).unwrap().outer(&bu).unwrap()).unwrap();
        assert!(gm.eval(&x, 0.0).unwrap().distance(&recon).unwrap() < 10.0 * tol);
    }
    let p = plane_disk(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    assert!(shape_operator(&p, 0).unwrap().eval(&[0.1, 0.2, 0.0], 0.0).unwrap().norm() < 1e-12);
}

#[test]
fn material_derivative_examples() {
    let c = 0.1;
    for mode in [FdMode::Fd2, FdMode::Analytic] {
        let g = expanding_sphere(1.0, c, EngineConfig::new(mode)).unwrap();
        let w = TensorField::from_static_fn(3, 1, move |x| {
            let s = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            x.iter().map(|v| c * v / s).collect()
        })
        .unwrap();
        let f = TensorField::static_scalar(3, |x| (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()).unwrap();
        let t = 0.5;
        let x = [0.0, 0.6 * 1.05, 0.8 * 1.05];
        let d = material_derivative(&g, &f, &w).unwrap();
        assert!((d.eval_scalar(&x, t).unwrap() - c).abs() < 1e-8);
        let tf = TensorField::scalar_fn(3, |x, t| t * x[1]).unwrap();
        let zero = TensorField::zeros(3, 1).unwrap();
        let d = material_derivative(&g, &tf, &zero).unwrap();
        assert!((d.eval_scalar(&x, t).unwrap() - x[1]).abs() < 1e-8);
        // expanding sphere: radial normals are transported unchanged
        let cw = projector_rate_at(&g, &w, &x, t).unwrap();
        assert!(cw.norm() < 1e-6);
    }
}

#[test]
fn rotating_plane_projector_rate() {
    let omega = 0.8;
    for mode in [FdMode::Fd2, FdMode::Analytic] {
        let g = rotating_plane(omega, EngineConfig::new(mode)).unwrap();
        let w = rotation_field([0.0, 1.0, 0.0], omega);
        let t = 0.3;
        let n = [(omega * t).sin(), 0.0, (omega * t).cos()];
        // a point on the plane at time t
        let x = [n[2] * 0.4, 0.2, -n[0] * 0.4];
        let frame = g.frame_at(&x, t).unwrap();
        let cw = projector_rate_at(&g, &w, &x, t).unwrap();
        assert!(cw.norm() > 0.1);
        assert!(frame.project(&cw).unwrap().norm() < 1e-6);
        // 𝒟_w n = −n : ∇w
        let nf = g.normal_field(0).unwrap();
        let dn = material_derivative(&g, &nf, &w).unwrap().eval(&x, t).unwrap();
        let gw = gradient(&g, &w).unwrap().eval(&x, t).unwrap();
        let expect = Tensor::covector(&n).unwrap().contract_left(&gw).unwrap().scale(-1.0);
        assert!(dn.distance(&expect).unwrap() < 1e-5);
    }
    let non_unit = sphere(1.0, EngineConfig::new(FdMode::Analytic)).unwrap();
    assert!(projector_rate_at(&non_unit, &TensorField::zeros(3, 1).unwrap(), &[0.0, 0.0, 1.0], 0.0).is_ok());
}

#[test]
fn product_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for name in ["sphere", "plane_disk"] {
        for (mode, tol) in MODES {
            let cfg = EngineConfig::new(mode);
            let g = if name == "sphere" { sphere(1.0, cfg).unwrap() } else { plane_disk(1.0, cfg).unwrap() };
            let s1 = random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap();
            let t1 = random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap();
            let t2 = random_quadratic_field(&mut rng, 3, 2, 1.0).unwrap();
            let x = if name == "sphere" { random_sphere_point(&mut rng, 3, 1.0) } else { vec![0.3, -0.2, 0.0] };
            let ev = |f: &TensorField| f.eval(&x, 0.0).unwrap();
            let gm = |f: &TensorField| submanifold_gradient(&g, f).unwrap();

            let lhs = ev(&gm(&s1.frobenius(&t1).unwrap()));
            let rhs = ev(&t1.contract_left(&gm(&s1)).unwrap()).add(&ev(&s1.contract_left(&gm(&t1)).unwrap())).unwrap();
            assert!(lhs.distance(&rhs).unwrap() < tol);

            let lhs = ev(&gm(&s1.outer(&t1).unwrap()));
            let gs = ev(&gm(&s1));
            let tt = ev(&t1);
            // ∇_M S ⊗ T with the derivative slot moved to the end
            let a = Tensor::from_fn(3, 3, |i| gs.get(&[i[0], i[2]]).unwrap() * tt.get(&[i[1]]).unwrap()).unwrap();
            let b = ev(&s1).outer(&ev(&gm(&t1))).unwrap();
            assert!(lhs.distance(&a.add(&b).unwrap()).unwrap() < tol);

            let lhs = ev(&divergence(&g, &s1.contract_left(&t2).unwrap()).unwrap());
            let rhs = ev(&s1.contract_left(&divergence(&g, &t2).unwrap()).unwrap())
                .add(&ev(&t2.contract_left(&gm(&s1)).unwrap()))
                .unwrap();
            assert!(lhs.distance(&rhs).unwrap() < tol);

            {
                let lhs = ev(&curl(&g, &s1.contract_left(&t2).unwrap()).unwrap());
                let rhs = ev(&s1.contract_left(&curl(&g, &t2).unwrap()).unwrap())
                    .add(&ev(&t2.contract_left(&curl_up(&g, &s1).unwrap()).unwrap()))
                    .unwrap();
                assert!(lhs.distance(&rhs).unwrap() < tol, "{name} {mode}");
            }
        }
    }
}
