use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::differential::{project, submanifold_gradient, EngineConfig, FdMode};
use crate::field::TensorField;
use crate::geometry::{expanding_sphere, hemisphere, sphere};
use crate::integration::{expanding_sphere_atlas, hemisphere_atlas, sphere_atlas, QuadratureSpec};
use crate::samples::{random_quadratic_field, random_sphere_point, random_vector};
use crate::tensor::{norm2, Tensor};

const MODES: [FdMode; 2] = [FdMode::Fd2, FdMode::Analytic];

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn rigid(omega: f64) -> EulerState {
    let grad = Tensor::from_matrix(&[vec![0.0, -omega, 0.0], vec![omega, 0.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
    let u = TensorField::builder(3, 1, move |x, _| vec![-omega * x[1], omega * x[0], 0.0])
        .stationary()
        .gradient(TensorField::constant(grad))
        .build()
        .unwrap();
    let p = TensorField::static_scalar(3, move |x| 0.5 * omega * omega * (x[0] * x[0] + x[1] * x[1])).unwrap();
    EulerState::new(u, p, 1.0).unwrap()
}

fn scalar(v: f64) -> TensorField {
    TensorField::constant(Tensor::scalar(3, v).unwrap())
}

#[test]
fn rigid_rotation_is_a_steady_euler_flow() {
    let omega = 1.3;
    for mode in MODES {
        let g = sphere(1.0, EngineConfig::new(mode)).unwrap();
        let atlas = sphere_atlas(&g, 1.0, quad()).unwrap();
        let state = rigid(omega);
        let r = euler_residual(&atlas, &state, 0.0, 64).unwrap();
        assert!(r.momentum < 1e-5 && r.divergence < 1e-5 && r.divergence_form < 1e-5, "{mode}: {r:?}");
        assert_eq!(r.boundary_slip, 0.0);
        assert!(extrinsic_momentum(&atlas, &state).unwrap().norm() < 1e-8);
        let fb = force_balance_residual(&atlas, &state).unwrap();
        assert!(fb.sum.norm() < 1e-6 * omega * omega * 4.0 * PI);
        assert!(momentum_flux_integral(&atlas, &state).unwrap().norm() < 1e-6);
        let pts = sample_points(&atlas, 20);
        assert!(divergence_identity_residual(&g, &state.velocity, &pts, 0.0).unwrap() < 1e-5);
        state.check_tangential(&g, &pts, 0.0, 1e-8).unwrap();
    }
}

#[test]
fn trivial_and_unbalanced_states() {
    let g = sphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let atlas = sphere_atlas(&g, 1.0, quad()).unwrap();
    let rest = EulerState::new(TensorField::zeros(3, 1).unwrap(), scalar(2.0), 1.0).unwrap();
    let r = euler_residual(&atlas, &rest, 0.0, 16).unwrap();
    assert!(r.momentum == 0.0 && r.divergence == 0.0);
    assert!(force_balance_residual(&atlas, &rest).unwrap().sum.norm() < 1e-6);

    let omega = 0.7;
    let mut state = rigid(omega);
    state.pressure = scalar(0.0);
    let m = momentum_field(&g, &state).unwrap();
    for x in sample_points(&atlas, 10) {
        let frame = g.frame_at(&x, 0.0).unwrap();
        let expect = norm2(&frame.project_vector(&[x[0], x[1], 0.0])) * omega * omega;
        assert!((m.eval(&x, 0.0).unwrap().norm() - expect).abs() < 1e-5);
    }

    let base = force_balance_residual(&atlas, &rigid(omega)).unwrap();
    let mut shifted = rigid(omega);
    shifted.pressure = shifted.pressure.add(&scalar(3.0)).unwrap();
    let moved = force_balance_residual(&atlas, &shifted).unwrap();
    assert!(base.sum.distance(&moved.sum).unwrap() < 1e-6);
}

#[test]
fn hemisphere_force_balance_terms() {
    let omega = 1.0;
    let g = hemisphere(1.0, EngineConfig::new(FdMode::Analytic)).unwrap();
    let atlas = hemisphere_atlas(&g, 1.0, quad()).unwrap();
    let fb = force_balance_residual(&atlas, &rigid(omega)).unwrap();
    let z = |t: &Tensor| t.as_slice()[2];
    assert!((z(&fb.pressure_curvature) - 0.5 * PI).abs() < 1e-9);
    assert!((z(&fb.boundary_pressure) + PI).abs() < 1e-9);
    assert!((z(&fb.centripetal) - 0.5 * PI).abs() < 1e-9);
    assert!(fb.sum.norm() < 1e-9);
    let r = euler_residual(&atlas, &rigid(omega), 0.0, 32).unwrap();
    assert!(r.boundary_slip < 1e-12);
}

#[test]
fn tangent_velocity_identity() {
    let g = hemisphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let atlas = hemisphere_atlas(&g, 1.0, quad()).unwrap();
    let ez = TensorField::constant(Tensor::covector(&[0.0, 0.0, 1.0]).unwrap());
    assert!(tangent_velocity_residual(&atlas, &ez).unwrap().abs < 1e-6);
    assert_eq!(tangent_velocity_residual(&atlas, &TensorField::zeros(3, 1).unwrap()).unwrap().abs, 0.0);

    let s = sphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let closed = sphere_atlas(&s, 1.0, quad()).unwrap();
    let killing = tangent_velocity_residual(&closed, &rigid(1.0).velocity).unwrap();
    assert!(killing.lhs.norm() < 1e-8 && killing.rhs.norm() < 1e-8);
    let gz = submanifold_gradient(&s, &TensorField::coordinate(3, 2).unwrap()).unwrap();
    let state = EulerState::new(gz.clone(), scalar(0.0), 1.0).unwrap();
    let j = extrinsic_momentum(&closed, &state).unwrap();
    let r = tangent_velocity_residual(&closed, &gz).unwrap();
    assert!(j.norm() > 1.0);
    assert!(j.distance(&r.rhs).unwrap() < 1e-6);
}

#[test]
fn stress_force_examples() {
    for mode in MODES {
        let g = sphere(1.0, EngineConfig::new(mode)).unwrap();
        let closed = sphere_atlas(&g, 1.0, quad()).unwrap();
        let pp = StressState::new(g.projector_field().times(&scalar(2.5)).unwrap()).unwrap();
        assert!(stress_force(&closed, &pp).unwrap().norm() < 1e-6);
        for r in torque_equivalence_residual(&closed, &pp).unwrap() {
            assert!(r.abs < 1e-6);
        }
        let n = g.normal_field(0).unwrap();
        let nn = StressState::new(n.outer(&n).unwrap()).unwrap();
        assert!(stress_force(&closed, &nn).unwrap().norm() < 1e-6);

        let h = hemisphere(1.0, EngineConfig::new(mode)).unwrap();
        let cap = hemisphere_atlas(&h, 1.0, quad()).unwrap();
        let n = h.normal_field(0).unwrap();
        let nn = StressState::new(n.outer(&n).unwrap()).unwrap();
        let f = stress_force(&cap, &nn).unwrap();
        assert!((f.as_slice()[2] - 2.0 * PI).abs() < 1e-6 && f.as_slice()[0].abs() < 1e-6);

        let zero = StressState::new(TensorField::zeros(3, 2).unwrap()).unwrap();
        assert_eq!(stress_force(&cap, &zero).unwrap().norm(), 0.0);
        assert!(stress_torque(&cap, &zero).unwrap().iter().all(|m| *m == 0.0));
    }
}

#[test]
fn torque_identities_for_random_stress() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let g = hemisphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let cap = hemisphere_atlas(&g, 1.0, quad()).unwrap();
    let a = random_quadratic_field(&mut rng, 3, 2, 1.0).unwrap();
    for r in generator_identity_residual(&cap, &a).unwrap() {
        assert!(r.abs < 1e-5, "{r:?}");
    }
    let state = StressState::new(random_quadratic_field(&mut rng, 3, 2, 1.0).unwrap()).unwrap();
    let res = torque_equivalence_residual(&cap, &state).unwrap();
    assert_eq!(res.len(), 3);
    for r in res {
        assert!(r.abs < 1e-5, "{r:?}");
    }
}

#[test]
fn normal_stress_from_tangential_orientations() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let g = sphere(1.0, EngineConfig::new(FdMode::Analytic)).unwrap();
    for _ in 0..1000 {
        let x = random_sphere_point(&mut rng, 3, 1.0);
        let frame = g.frame_at(&x, 0.0).unwrap();
        let n = &frame.normals[0];
        let p = frame.p().clone();
        let (a, b, c) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let v = random_vector(&mut rng, 3);
        let w1 = frame.project_vector(&random_vector(&mut rng, 3));
        let w2 = frame.project_vector(&random_vector(&mut rng, 3));
        let sym = Tensor::covector(&w1).unwrap().outer(&Tensor::covector(&w2).unwrap()).unwrap();
        let sym = sym.add(&sym.transpose2().unwrap()).unwrap();
        let sigma = p
            .scale(a)
            .add(&Tensor::covector(n).unwrap().outer(&Tensor::covector(&v).unwrap()).unwrap().scale(b))
            .unwrap()
            .add(&sym.scale(c))
            .unwrap();
        let (pairings, nat) = pointwise_stress_checks(&frame, &sigma).unwrap();
        assert!(pairings.iter().all(|v| v.abs() < 1e-12));
        assert!(nat <= 1e-10);

        let pw = frame.project_vector(&random_vector(&mut rng, 3));
        let sigma = Tensor::covector(&pw).unwrap().outer(&Tensor::covector(n).unwrap()).unwrap();
        let (pairings, nat) = pointwise_stress_checks(&frame, &sigma).unwrap();
        assert!(pairings.iter().any(|v| v.abs() > 1e-6));
        assert!((nat - norm2(&pw)).abs() < 1e-8);
    }
    let pp = StressState::new(g.projector_field().times(&scalar(1.5)).unwrap()).unwrap();
    let d = equilibrium_diagnostics(&g, &pp, &[0.0, 0.6, 0.8], 0.0, true).unwrap();
    // Div_M(pP) = −pκ for constant p
    assert!((d.div_sigma_bar[1] + 1.5 * 2.0 * 0.6).abs() < 1e-8);
    assert!(d.normal_at_tangential < 1e-12);
}

#[test]
fn dirichlet_energy_examples() {
    let g = sphere(1.0, EngineConfig::new(FdMode::Fd2)).unwrap();
    let atlas = sphere_atlas(&g, 1.0, quad()).unwrap();
    let z = TensorField::coordinate(3, 2).unwrap();
    let e = dirichlet_energy(&atlas, &z).unwrap();
    assert!((e - 4.0 * PI / 3.0).abs() < 1e-8);
    assert!((dirichlet_energy(&atlas, &z.scale(3.0).unwrap()).unwrap() - 9.0 * e).abs() < 1e-7);
    assert_eq!(dirichlet_energy(&atlas, &scalar(4.0)).unwrap(), 0.0);
}

fn radial(c: f64) -> TensorField {
    TensorField::from_static_fn(3, 1, move |x| {
        let s = norm2(x);
        x.iter().map(|v| c * v / s).collect()
    })
    .unwrap()
}

fn expanding(mode: FdMode, c: f64, field: TensorField) -> EvolvingScenario {
    let g = expanding_sphere(1.0, c, EngineConfig::new(mode)).unwrap();
    let atlas = expanding_sphere_atlas(&g, 1.0, c, 0.0, QuadratureSpec { order: 12, panels: 2 }).unwrap();
    EvolvingScenario::new(atlas, radial(c), field, 5e-3).unwrap()
}

#[test]
fn dirichlet_rate_on_expanding_sphere() {
    let c = 0.1;
    for mode in MODES {
        let s = expanding(mode, c, TensorField::coordinate(3, 2).unwrap());
        let r = dirichlet_rate(&s).unwrap();
        assert!((r.oracle - 8.0 * PI * c / 3.0).abs() < 1e-5, "{mode}: {r:?}");
        assert!(r.residual.rel < 1e-4, "{mode}: {r:?}");
    }
    let g = expanding_sphere(1.0, c, EngineConfig::new(FdMode::Fd2)).unwrap();
    let ezz = TensorField::constant(Tensor::from_matrix(&[vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, 1.0]]).unwrap());
    let s = expanding(FdMode::Fd2, c, project(&g, &ezz).unwrap());
    let r = dirichlet_rate(&s).unwrap();
    assert!(r.residual.abs / r.oracle.abs().max(1.0) < 1e-3, "{r:?}");
}

#[test]
fn reynolds_transport() {
    let c = 0.1;
    let s = expanding(FdMode::Fd2, c, scalar(1.0));
    let r = reynolds_residual(&s, &scalar(1.0)).unwrap();
    assert!((r.rhs.value() - 8.0 * PI * c).abs() < 8.0 * PI * c * 1e-6);
    assert!(r.rel < 1e-6);
    let x = TensorField::position(3).unwrap();
    assert!(reynolds_residual(&s, &x).unwrap().abs < 1e-5);
    let tx = TensorField::from_fn(3, 1, |x, t| x.iter().map(|v| v * (1.0 + t)).collect()).unwrap();
    assert!(reynolds_residual(&s, &tx).unwrap().abs < 1e-5);
}

#[test]
fn commutators_on_expanding_sphere() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let c = 0.1;
    for mode in MODES {
        let s = expanding(mode, c, TensorField::coordinate(3, 0).unwrap());
        let pts = sample_points(&s.atlas, 8);
        for rank in 0..2 {
            let f = random_quadratic_field(&mut rng, 3, rank, 1.0).unwrap();
            let r = commutator_residuals(s.geometry(), &s.velocity, &f, &pts, 0.0).unwrap();
            assert!(r.ambient < 1e-4 && r.submanifold < 1e-4 && r.projector < 1e-6 && r.tangential_rate < 1e-6, "{mode} {r:?}");
        }
        let f = random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap();
        let g2 = random_quadratic_field(&mut rng, 3, 1, 1.0).unwrap();
        let a = random_quadratic_field(&mut rng, 3, 2, 1.0).unwrap();
        assert!(tangential_pairing_residual(s.geometry(), &f, &g2, &a, &pts, 0.0).unwrap() < 1e-8);
    }
}
