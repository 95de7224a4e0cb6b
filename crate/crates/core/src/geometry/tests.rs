use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::differential::engine::{EngineConfig, FdMode};
use crate::tensor::{unit_vector, Tensor};

fn cfg() -> EngineConfig {
    EngineConfig::new(FdMode::Analytic)
}

fn random_tensor(rng: &mut ChaCha8Rng, n: usize, q: usize) -> Tensor {
    Tensor::from_fn(n, q, |_| rng.gen_range(-1.0..1.0)).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = norm2(&v);
        if s > 0.1 && s < 1.0 {
            return v.iter().map(|c| c / s).collect();
        }
    }
}

fn brute_projection(frame: &GeometryFrame, t: &Tensor) -> Tensor {
    let n = t.dim();
    let cols: Vec<Vec<f64>> = (0..n).map(|k| frame.project_vector(&unit_vector(n, k))).collect();
    Tensor::from_fn(n, t.rank(), |idx| {
        let args: Vec<&[f64]> = idx.iter().map(|&i| cols[i].as_slice()).collect();
        t.evaluate(&args).unwrap()
    })
    .unwrap()
}

#[test]
fn unit_circle_frame() {
    let g = circle2d(1.0, cfg()).unwrap();
    let f = g.frame_at(&[1.0, 0.0], 0.0).unwrap();
    assert!(norm2(&[f.normals[0][0] - 1.0, f.normals[0][1]]) < 1e-14);
    let expect = Tensor::from_matrix(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(f.p().distance(&expect).unwrap() < 1e-14);
}

#[test]
fn sphere_north_pole_projector() {
    let g = sphere(1.0, cfg()).unwrap();
    let f = g.frame_at(&[0.0, 0.0, 1.0], 0.0).unwrap();
    let expect = Tensor::from_matrix(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
    assert!(f.p().distance(&expect).unwrap() < 1e-14);
}

#[test]
fn codim_two_circle_frame() {
    for mode in [FdMode::Analytic, FdMode::Fd2] {
        let g = circle3d(1.0, EngineConfig::new(mode)).unwrap();
        let f = g.frame_at(&[1.0, 0.0, 0.0], 0.0).unwrap();
        assert!(norm2(&[f.normals[0][0], f.normals[0][1], f.normals[0][2] - 1.0]) < 1e-10);
        assert!(norm2(&[f.normals[1][0] - 1.0, f.normals[1][1], f.normals[1][2]]) < 1e-10);
        let ey = Tensor::covector(&[0.0, 1.0, 0.0]).unwrap();
        assert!(f.p().distance(&ey.outer(&ey).unwrap()).unwrap() < 1e-10);
    }
}

#[test]
fn frame_invariants_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let geoms = [sphere(2.0, cfg()).unwrap(), torus(2.0, 0.5, cfg()).unwrap()];
    for g in &geoms {
        for _ in 0..50 {
            let x: Vec<f64> = if g.name() == "sphere" {
                random_unit(&mut rng).iter().map(|c| 2.0 * c).collect()
            } else {
                let (a, b) = (rng.gen_range(0.0..6.3f64), rng.gen_range(0.0..6.3f64));
                let rho = 2.0 + 0.5 * b.cos();
                vec![rho * a.cos(), rho * a.sin(), 0.5 * b.sin()]
            };
            let f = g.frame_at(&x, 0.0).unwrap();
            let p = f.p();
            assert!(p.bigcirc(p).unwrap().distance(p).unwrap() < 1e-10);
            assert!(f.n().bigcirc(f.n()).unwrap().distance(f.n()).unwrap() < 1e-10);
            assert!(p.bigcirc(f.n()).unwrap().norm() < 1e-10);
            assert!(p.add(f.n()).unwrap().distance(&Tensor::identity(3).unwrap()).unwrap() < 1e-10);
            for n in &f.normals {
                assert!(p.insert_right(n).unwrap().norm() < 1e-10);
                assert!((norm2(n) - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn outside_tube_and_dependent_gradients_are_rejected() {
    let g = sphere(1.0, cfg()).unwrap();
    assert!(matches!(g.frame_at(&[0.2, 0.0, 0.0], 0.0), Err(Error::OutsideTube { .. })));
    let lin = |k: usize| {
        LevelSpec::stationary(
            3,
            "plane",
            move |x| x[2] + 1e-3 * k as f64 * x[0],
            move |_| vec![1e-3 * k as f64, 0.0, 1.0],
            |_| vec![0.0; 9],
        )
        .into_field()
        .unwrap()
    };
    let g = LevelSetGeometry::new("twice", vec![lin(0), lin(0)], 1.0, false, cfg()).unwrap();
    assert!(matches!(g.frame_at(&[0.0; 3], 0.0), Err(Error::DependentGradients { index: 1, .. })));
    let flat = LevelSpec::stationary(3, "flat", |x| x[2] * x[2], |x| vec![0.0, 0.0, 2.0 * x[2]], |_| vec![0.0; 9])
        .into_field()
        .unwrap();
    let g = LevelSetGeometry::new("flat", vec![flat], 1.0, false, cfg()).unwrap();
    assert!(matches!(g.frame_at(&[0.0; 3], 0.0), Err(Error::DegenerateGradient { .. })));
}

#[test]
fn projection_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = sphere(1.0, cfg()).unwrap();
    for _ in 0..20 {
        let f = g.frame_at(&random_unit(&mut rng), 0.0).unwrap();
        for q in 0..=3 {
            let t = random_tensor(&mut rng, 3, q);
            let fast = f.project(&t).unwrap();
            assert!(fast.distance(&brute_projection(&f, &t)).unwrap() < 1e-12);
        }
    }
}

#[test]
fn projection_examples() {
    let g = sphere(1.0, cfg()).unwrap();
    let f = g.frame_at(&[0.6, 0.0, 0.8], 0.0).unwrap();
    let id = Tensor::identity(3).unwrap();
    assert!(f.project(&id).unwrap().distance(f.p()).unwrap() < 1e-14);
    let n = Tensor::covector(&f.normals[0]).unwrap();
    assert!(f.project(&n.outer(&n).unwrap()).unwrap().norm() < 1e-14);
    assert!(f.is_tangent(f.p(), 1e-12).unwrap());
    assert!(!f.is_tangent(f.n(), 1e-12).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_tensor(&mut rng, 3, 3);
    let pt = f.project(&t).unwrap();
    assert!(f.is_tangent(&pt, 1e-12).unwrap());
    // Frobenius product against a tangent tensor only sees the tangential part.
    let s = f.project(&random_tensor(&mut rng, 3, 3)).unwrap();
    assert!((s.frobenius(&t).unwrap() - s.frobenius(&pt).unwrap()).abs() < 1e-11);
}

#[test]
fn dagger_on_the_plane() {
    let g = plane_disk(1.0, cfg()).unwrap();
    let f = g.frame_at(&[0.3, 0.2, 0.0], 0.0).unwrap();
    let d = f.dagger(&[1.0, 0.0, 0.0]).unwrap();
    assert!(norm2(&[d[0], d[1] - 1.0, d[2]]) < 1e-14);
    assert!(norm2(&f.dagger(&[0.0, 0.0, 1.0]).unwrap()) < 1e-14);
    let b = f.tangent_basis_2d().unwrap();
    assert_eq!(b.t1, vec![1.0, 0.0, 0.0]);
    assert_eq!(b.t2, vec![0.0, 1.0, 0.0]);
}

#[test]
fn dagger_properties_on_sphere() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = sphere(1.0, cfg()).unwrap();
    for _ in 0..1000 {
        let f = g.frame_at(&random_unit(&mut rng), 0.0).unwrap();
        let b = f.tangent_basis_2d().unwrap();
        assert!((norm2(&b.t1) - 1.0).abs() < 1e-10 && (norm2(&b.t2) - 1.0).abs() < 1e-10);
        assert!(dot(&b.t1, &b.t2).abs() < 1e-10);
        assert!(determinant(&[&b.t1, &b.t2, &f.normals[0]]) > 0.0);
        let t2 = f.dagger(&b.t1).unwrap();
        assert!(norm2(&[t2[0] - b.t2[0], t2[1] - b.t2[1], t2[2] - b.t2[2]]) < 1e-10);
    }
    for _ in 0..50 {
        let f = g.frame_at(&random_unit(&mut rng), 0.0).unwrap();
        let u: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (pu, pv) = (f.project_vector(&u), f.project_vector(&v));
        let (ud, vd) = (f.dagger(&u).unwrap(), f.dagger(&v).unwrap());
        assert!((dot(&ud, &vd) - dot(&pu, &pv)).abs() < 1e-12);
        assert!(dot(&pu, &ud).abs() < 1e-12);
        let udd = f.dagger(&ud).unwrap();
        assert!(norm2(&[udd[0] + pu[0], udd[1] + pu[1], udd[2] + pu[2]]) < 1e-12);
    }
    let torus = torus(2.0, 0.5, cfg()).unwrap();
    let f = torus.frame_at(&[2.5, 0.0, 0.0], 0.0).unwrap();
    assert!(f.tangent_basis_2d().is_ok());
    let curve = circle3d(1.0, cfg()).unwrap();
    let f = curve.frame_at(&[1.0, 0.0, 0.0], 0.0).unwrap();
    assert!(matches!(f.dagger(&[1.0, 0.0, 0.0]), Err(Error::WrongCodimension { .. })));
}

#[test]
fn analytic_normal_derivatives_match_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let analytic = helix_segment(1.0, 0.3, 1.0, cfg()).unwrap();
    let fd = analytic.with_config(EngineConfig::new(FdMode::Fd4)).unwrap();
    for _ in 0..10 {
        let s: f64 = rng.gen_range(0.0..6.0);
        let x = [s.cos() + 0.01, s.sin() - 0.02, 0.3 * s + 0.01];
        for i in 0..2 {
            let ga = analytic.engine().gradient(&analytic.normal_field(i).unwrap()).unwrap();
            let gf = fd.engine().gradient(&fd.normal_field(i).unwrap()).unwrap();
            let diff = ga.eval(&x, 0.0).unwrap().distance(&gf.eval(&x, 0.0).unwrap()).unwrap();
            assert!(diff < 1e-8, "normal {i}: {diff}");
        }
    }
}

#[test]
fn torus_hessian_matches_differences() {
    let g = torus(2.0, 0.5, cfg()).unwrap();
    let d = &g.level_functions()[0];
    let fd = crate::differential::engine::DerivativeEngine::with_mode(FdMode::Fd4);
    let ha = g.engine().gradient(&g.engine().gradient(d).unwrap()).unwrap();
    let hf = fd.gradient(&fd.gradient(d).unwrap()).unwrap();
    let x = [1.9, 0.7, 0.3];
    assert!(ha.eval(&x, 0.0).unwrap().distance(&hf.eval(&x, 0.0).unwrap()).unwrap() < 1e-6);
}

#[test]
fn time_dependent_normals() {
    let g = rotating_plane(0.7, cfg()).unwrap();
    let n = g.normal_field(0).unwrap();
    let dn = g.engine().time_derivative(&n).unwrap();
    let t = 0.4;
    let v = dn.eval(&[0.1, 0.2, 0.0], t).unwrap();
    let expect = [0.7 * (0.7 * t).cos(), 0.0, -0.7 * (0.7 * t).sin()];
    assert!(norm2(&[v.as_slice()[0] - expect[0], v.as_slice()[1], v.as_slice()[2] - expect[2]]) < 1e-12);
}
