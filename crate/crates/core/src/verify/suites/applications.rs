use std::f64::consts::PI;

use rand::Rng;

use crate::applications::{
    commutator_residuals, dirichlet_energy, dirichlet_rate, divergence_identity_residual, euler_residual, extrinsic_momentum,
    force_balance_residual, generator_identity_residual, momentum_flux_integral, pointwise_stress_checks, reynolds_residual,
    sample_points, stress_force, tangent_velocity_residual, tangential_pairing_residual, torque_equivalence_residual, EulerState,
    EvolvingScenario, StressState,
};
use crate::differential::{divergence, mean_curvature, project, FdMode};
use crate::error::Result;
use crate::field::TensorField;
use crate::samples::{random_quadratic_field, random_sphere_point, random_vector, rotation_field};
use crate::tensor::{norm2, Tensor};
use crate::verify::{Check, Ctx, Outcome, Worst};

use super::tol;

const SPHERE_OMEGA: f64 = 1.3;
const CAP_OMEGA: f64 = 1.0;
const ORACLE_STEP: f64 = 5e-3;
const FRAMES: usize = 1000;

/// Rigid rotation about e_z with pressure `½ω²(x² + y²)`.
fn rigid(omega: f64) -> Result<EulerState> {
    let u = rotation_field([0.0, 0.0, 1.0], omega)?;
    let p = TensorField::static_scalar(3, move |x| 0.5 * omega * omega * (x[0] * x[0] + x[1] * x[1]))?;
    EulerState::new(u, p, 1.0)
}

fn scalar(v: f64) -> TensorField {
    TensorField::constant(Tensor::scalar(3, v).expect("scalar"))
}

fn z_vector(v: f64) -> Vec<f64> {
    vec![0.0, 0.0, v]
}

pub(super) fn euler() -> Vec<Check> {
    let residual_check = |name: &'static str, anchor: &'static str, pick: fn(&crate::applications::EulerResiduals) -> f64| {
        Check::new(format!("euler.sphere.{name}"), anchor, Some("sphere"), 1e-5, move |cx| {
            let s = cx.setup("sphere")?;
            let r = euler_residual(&s.atlas, &rigid(SPHERE_OMEGA)?, 0.0, 64)?;
            Ok(Outcome::max_error(pick(&r)))
        })
    };
    vec![
        residual_check("momentum", "ρ(∂_t u + ∇^cov u·u) + ∇_M p = 0 for rigid rotation", |r| r.momentum),
        residual_check("incompressibility", "div_M u = 0 for rigid rotation", |r| r.divergence),
        residual_check("divergence_form", "ρ∂_t u + ℙDiv_M(ρu⊗u + pP) = 0 for rigid rotation", |r| r.divergence_form),
        Check::new("euler.sphere.convective_identity", "ℙDiv_M(u⊗u) = ∇^cov u·u when div_M u = 0", Some("sphere"), 1e-5, |cx| {
            let s = cx.setup("sphere")?;
            let pts = sample_points(&s.atlas, 20);
            Ok(Outcome::max_error(divergence_identity_residual(&s.geometry, &rigid(SPHERE_OMEGA)?.velocity, &pts, 0.0)?))
        }),
        Check::new("euler.sphere.extrinsic_momentum", "J = ∫ ρu = 0 for rigid rotation", Some("sphere"), 1e-8, |cx| {
            let s = cx.setup("sphere")?;
            let j = extrinsic_momentum(&s.atlas, &rigid(SPHERE_OMEGA)?)?;
            Ok(Outcome::vectors(j.into_vec(), vec![0.0; 3]))
        }),
        Check::new("euler.sphere.force_balance", "∫ pκ + ∫_∂M p t + Σ ∫ ρ(B_i(u)·u) n_i = 0", Some("sphere"), 1e-6, |cx| {
            let s = cx.setup("sphere")?;
            let r = s.param("R");
            let fb = force_balance_residual(&s.atlas, &rigid(SPHERE_OMEGA)?)?;
            let scale = SPHERE_OMEGA * SPHERE_OMEGA * 4.0 * PI * r * r * r;
            let abs = fb.sum.norm();
            Ok(Outcome { lhs: fb.sum.into_vec(), rhs: vec![0.0; 3], abs, rel: abs / scale.max(1.0) })
        })
        .rel(),
        Check::new("euler.sphere.momentum_flux", "∫ ℙDiv_M(ρu⊗u + pP) = 0 on a closed sphere", Some("sphere"), 1e-6, |cx| {
            let s = cx.setup("sphere")?;
            Ok(Outcome::vectors(momentum_flux_integral(&s.atlas, &rigid(SPHERE_OMEGA)?)?.into_vec(), vec![0.0; 3]))
        }),
        Check::new("euler.hemisphere.pressure_curvature", "∫ pκ = (π/2) ω² R³ e_z", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let r = s.param("R");
            let fb = force_balance_residual(&s.atlas, &rigid(CAP_OMEGA)?)?;
            Ok(Outcome::vectors(fb.pressure_curvature.into_vec(), z_vector(0.5 * PI * CAP_OMEGA * CAP_OMEGA * r.powi(3))))
        })
        .rel(),
        Check::new("euler.hemisphere.boundary_pressure", "∫_∂M p t = −π ω² R³ e_z", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let r = s.param("R");
            let fb = force_balance_residual(&s.atlas, &rigid(CAP_OMEGA)?)?;
            Ok(Outcome::vectors(fb.boundary_pressure.into_vec(), z_vector(-PI * CAP_OMEGA * CAP_OMEGA * r.powi(3))))
        })
        .rel(),
        Check::new("euler.hemisphere.centripetal", "Σ ∫ ρ(B_i(u)·u) n_i = (π/2) ω² R³ e_z", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let r = s.param("R");
            let fb = force_balance_residual(&s.atlas, &rigid(CAP_OMEGA)?)?;
            Ok(Outcome::vectors(fb.centripetal.into_vec(), z_vector(0.5 * PI * CAP_OMEGA * CAP_OMEGA * r.powi(3))))
        })
        .rel(),
        Check::new("euler.hemisphere.force_balance", "pressure and centripetal forces balance on the cap", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let fb = force_balance_residual(&s.atlas, &rigid(CAP_OMEGA)?)?;
            let scale = fb.boundary_pressure.norm();
            let abs = fb.sum.norm();
            Ok(Outcome { lhs: fb.sum.into_vec(), rhs: vec![0.0; 3], abs, rel: abs / scale.max(1.0) })
        })
        .rel(),
        Check::new("euler.hemisphere.boundary_slip", "u·t = 0 on the equator for rigid rotation", Some("hemisphere"), 1e-12, |cx| {
            let s = cx.setup("hemisphere")?;
            Ok(Outcome::max_error(euler_residual(&s.atlas, &rigid(CAP_OMEGA)?, 0.0, 8)?.boundary_slip))
        }),
        Check::new("euler.hemisphere.tangent_velocity", "∫ Pu = −∫ div_M(Pu) x + ∫_∂M (u·t) x for u = e_z", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let ez = TensorField::constant(Tensor::covector(&[0.0, 0.0, 1.0])?);
            Ok(Outcome::residual(&tangent_velocity_residual(&s.atlas, &ez)?))
        }),
    ]
}

/// `σ = (Pw) ⊗ n` at a random frame: returns `(‖pairings‖, normal_at_tangential, ‖Pw‖)`.
fn contrapositive_sample(cx_rng: &mut impl Rng, geom: &crate::geometry::Geometry, r: f64) -> Result<(f64, f64, f64)> {
    let x = random_sphere_point(cx_rng, 3, r);
    let frame = geom.frame_at(&x, 0.0)?;
    let pw = frame.project_vector(&random_vector(cx_rng, 3));
    let sigma = Tensor::covector(&pw)?.outer(&Tensor::covector(&frame.normals[0])?)?;
    let (pairings, nat) = pointwise_stress_checks(&frame, &sigma)?;
    Ok((norm2(&pairings), nat, norm2(&pw)))
}

pub(super) fn stress(mode: FdMode) -> Vec<Check> {
    vec![
        Check::new(
            "stress.hemisphere.generator_identity",
            "∫_∂M (l_K:A)·t + ∫ (l_K:A)·κ = ∫ l_K:Div_M A − ∫ A ⊙ ω_K for every K",
            Some("hemisphere"),
            1e-5,
            |cx| {
                let s = cx.setup("hemisphere")?;
                let a = random_quadratic_field(&mut cx.rng(), 3, 2, 1.0)?;
                let mut w = Worst::new();
                for r in generator_identity_residual(&s.atlas, &a)? {
                    w.push(r.lhs.as_slice(), r.rhs.as_slice(), 1.0);
                }
                Ok(w.finish())
            },
        ),
        Check::new(
            "stress.hemisphere.torque_equivalence",
            "stress torque equals ∫ l_K ⊙ Div_M σ̄ − ∫ ω_K ⊙ σ̄ for every K",
            Some("hemisphere"),
            1e-5,
            |cx| {
                let s = cx.setup("hemisphere")?;
                let state = StressState::new(random_quadratic_field(&mut cx.rng(), 3, 2, 1.0)?)?;
                let mut w = Worst::new();
                for r in torque_equivalence_residual(&s.atlas, &state)? {
                    w.push(r.lhs.as_slice(), r.rhs.as_slice(), 1.0);
                }
                Ok(w.finish())
            },
        ),
        Check::new("stress.hemisphere.normal_normal_force", "σ = n⊗n gives F = 2πR e_z on the cap", Some("hemisphere"), 1e-6, |cx| {
            let s = cx.setup("hemisphere")?;
            let r = s.param("R");
            let n = s.geometry.normal_field(0)?;
            let f = stress_force(&s.atlas, &StressState::new(n.outer(&n)?)?)?;
            Ok(Outcome::vectors(f.into_vec(), z_vector(2.0 * PI * r)))
        })
        .rel(),
        Check::new("stress.sphere.isotropic_force", "σ = pP has zero net force on a closed sphere", Some("sphere"), 1e-6, |cx| {
            let s = cx.setup("sphere")?;
            let f = stress_force(&s.atlas, &StressState::new(s.geometry.projector_field().times(&scalar(2.5))?)?)?;
            Ok(Outcome::vectors(f.into_vec(), vec![0.0; 3]))
        }),
        Check::new("stress.sphere.isotropic_divergence", "Div_M(pP) = −pκ for constant p", Some("sphere"), tol(mode, 1e-6, 1e-9), |cx| {
            let s = cx.setup("sphere")?;
            let p = 1.5;
            let d = divergence(&s.geometry, &s.geometry.projector_field().times(&scalar(p))?)?;
            let kappa = mean_curvature(&s.geometry)?;
            let mut w = Worst::new();
            for x in sample_points(&s.atlas, 12) {
                let expect: Vec<f64> = kappa.eval_vector(&x, 0.0)?.iter().map(|k| -p * k).collect();
                w.push(&d.eval_vector(&x, 0.0)?, &expect, 1.0);
            }
            Ok(w.finish())
        }),
        Check::new("stress.sphere.contrapositive_pairing", "σ = (Pw)⊗n has ω ⊙ σ̄ ≠ 0 (smallest norm over frames)", Some("sphere"), 1e-6, |cx| {
            contrapositive(cx, |(pairing, _, _)| pairing, |m, v| m.min(v), f64::INFINITY)
        })
        .at_least(),
        Check::new("stress.sphere.contrapositive_normal", "σ = (Pw)⊗n has max ‖Nσ(Pv)‖ = ‖Pw‖ (worst mismatch)", Some("sphere"), 1e-8, |cx| {
            contrapositive(cx, |(_, nat, pw)| (nat - pw).abs(), f64::max, 0.0)
        }),
        Check::new("stress.sphere.contrapositive_nonzero", "σ = (Pw)⊗n has normal stress ≠ 0 (smallest over frames)", Some("sphere"), 1e-6, |cx| {
            contrapositive(cx, |(_, nat, _)| nat, |m, v| m.min(v), f64::INFINITY)
        })
        .at_least(),
        Check::new(
            "stress.sphere.constrained_family",
            "σ = aP + b n⊗v + c(sym tangential) gives ω ⊙ σ̄ = 0 and no normal stress from tangential orientations",
            Some("sphere"),
            1e-10,
            |cx| {
                let s = cx.setup("sphere")?;
                let r = s.param("R");
                let mut rng = cx.rng();
                let mut worst: f64 = 0.0;
                for _ in 0..FRAMES {
                    let x = random_sphere_point(&mut rng, 3, r);
                    let frame = s.geometry.frame_at(&x, 0.0)?;
                    let n = Tensor::covector(&frame.normals[0])?;
                    let (a, b, c) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let v = Tensor::covector(&random_vector(&mut rng, 3))?;
                    let w1 = Tensor::covector(&frame.project_vector(&random_vector(&mut rng, 3)))?;
                    let w2 = Tensor::covector(&frame.project_vector(&random_vector(&mut rng, 3)))?;
                    let sym = w1.outer(&w2)?;
                    let sym = sym.add(&sym.transpose2()?)?;
                    let sigma = frame.p().scale(a).add(&n.outer(&v)?.scale(b))?.add(&sym.scale(c))?;
                    let (pairings, nat) = pointwise_stress_checks(&frame, &sigma)?;
                    worst = worst.max(nat).max(norm2(&pairings));
                }
                Ok(Outcome::max_error(worst))
            },
        ),
    ]
}

fn contrapositive(cx: &Ctx, pick: fn((f64, f64, f64)) -> f64, fold: fn(f64, f64) -> f64, init: f64) -> Result<Outcome> {
    let s = cx.setup("sphere")?;
    let r = s.param("R");
    let mut rng = cx.rng();
    let mut acc = init;
    for _ in 0..FRAMES {
        acc = fold(acc, pick(contrapositive_sample(&mut rng, &s.geometry, r)?));
    }
    Ok(Outcome::value(acc))
}

fn radial(c: f64) -> Result<TensorField> {
    TensorField::from_static_fn(3, 1, move |x| {
        let s = norm2(x);
        x.iter().map(|v| c * v / s).collect()
    })
}

/// Expanding sphere with its radial material velocity, current radius and speed.
fn expanding(cx: &Ctx, field: TensorField) -> Result<(EvolvingScenario, f64, f64)> {
    let s = cx.setup("expanding_sphere")?;
    let (r0, c, t) = (s.param("R0"), s.param("c"), s.param("t"));
    let scenario = EvolvingScenario::new(s.atlas, radial(c)?, field, ORACLE_STEP)?;
    Ok((scenario, r0 + c * t, c))
}

fn rotating(cx: &Ctx) -> Result<(crate::registry::Setup, TensorField)> {
    let s = cx.setup("rotating_plane")?;
    let w = rotation_field([0.0, 1.0, 0.0], s.param("omega"))?;
    Ok((s, w))
}

pub(super) fn evolving() -> Vec<Check> {
    let mut out = vec![
        Check::new("evolving.expanding_sphere.area_rate", "d/dt |M| = ∫ div_M w = 8πRc", Some("expanding_sphere"), 1e-6, |cx| {
            let (sc, r, c) = expanding(cx, scalar(1.0))?;
            let res = reynolds_residual(&sc, &scalar(1.0))?;
            Ok(Outcome::scalars(res.rhs.value(), 8.0 * PI * r * c))
        })
        .rel(),
        Check::new("evolving.expanding_sphere.reynolds_area", "d/dt ∫ 1 = ∫ div_M w against advected quadrature", Some("expanding_sphere"), 1e-6, |cx| {
            let (sc, _, _) = expanding(cx, scalar(1.0))?;
            Ok(Outcome::residual(&reynolds_residual(&sc, &scalar(1.0))?))
        })
        .rel(),
        Check::new("evolving.expanding_sphere.reynolds_position", "d/dt ∫ x = ∫ 𝒟_w x + ∫ (div_M w) x", Some("expanding_sphere"), 1e-5, |cx| {
            let x = TensorField::position(3)?;
            let (sc, _, _) = expanding(cx, x.clone())?;
            Ok(Outcome::residual(&reynolds_residual(&sc, &x)?))
        }),
        Check::new("evolving.expanding_sphere.dirichlet_energy", "½ ∫ ‖∇_M z‖² = 4πR²/3", Some("expanding_sphere"), 1e-7, |cx| {
            let (sc, r, _) = expanding(cx, TensorField::coordinate(3, 2)?)?;
            Ok(Outcome::scalars(dirichlet_energy(&sc.atlas, &sc.field)?, 4.0 * PI * r * r / 3.0))
        })
        .rel(),
        Check::new("evolving.expanding_sphere.dirichlet_oracle", "advected-quadrature rate of ½ ∫ ‖∇_M z‖² is 8πRc/3", Some("expanding_sphere"), 1e-5, |cx| {
            let (sc, r, c) = expanding(cx, TensorField::coordinate(3, 2)?)?;
            Ok(Outcome::scalars(dirichlet_rate(&sc)?.oracle, 8.0 * PI * r * c / 3.0))
        }),
        Check::new("evolving.expanding_sphere.dirichlet_rate_rank0", "dE/dt formula against the advected oracle for f = z", Some("expanding_sphere"), 1e-4, |cx| {
            let (sc, _, _) = expanding(cx, TensorField::coordinate(3, 2)?)?;
            Ok(Outcome::residual(&dirichlet_rate(&sc)?.residual))
        })
        .rel(),
        Check::new("evolving.expanding_sphere.dirichlet_rate_rank2", "dE/dt formula against the advected oracle for T = ℙ(e_z⊗e_z)", Some("expanding_sphere"), 1e-3, |cx| {
            let g = cx.setup("expanding_sphere")?.geometry;
            let ezz = TensorField::constant(Tensor::from_matrix(&[vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, 1.0]])?);
            let (sc, _, _) = expanding(cx, project(&g, &ezz)?)?;
            Ok(Outcome::residual(&dirichlet_rate(&sc)?.residual))
        })
        .rel(),
        Check::new(
            "evolving.expanding_sphere.dirichlet_rate_rank2_closed_form",
            "dE/dt = 0 for T = ℙ(e_z⊗e_z), whose energy does not depend on R",
            Some("expanding_sphere"),
            1e-5,
            |cx| {
                let g = cx.setup("expanding_sphere")?.geometry;
                let ezz = TensorField::constant(Tensor::from_matrix(&[vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, 1.0]])?);
                let (sc, _, _) = expanding(cx, project(&g, &ezz)?)?;
                Ok(Outcome::scalars(dirichlet_rate(&sc)?.formula, 0.0))
            },
        ),
    ];
    let commutators = |cx: &Ctx, geom: &crate::geometry::Geometry, w: &TensorField, pts: &[Vec<f64>], t: f64| -> Result<crate::applications::CommutatorResiduals> {
        let mut rng = cx.rng();
        let mut acc = crate::applications::CommutatorResiduals { ambient: 0.0, submanifold: 0.0, projector: 0.0, tangential_rate: 0.0 };
        for rank in 0..2 {
            let f = random_quadratic_field(&mut rng, 3, rank, 1.0)?;
            let r = commutator_residuals(geom, w, &f, pts, t)?;
            acc.ambient = acc.ambient.max(r.ambient);
            acc.submanifold = acc.submanifold.max(r.submanifold);
            acc.projector = acc.projector.max(r.projector);
            acc.tangential_rate = acc.tangential_rate.max(r.tangential_rate);
        }
        Ok(acc)
    };
    for (g, rotating_case) in [("expanding_sphere", false), ("rotating_plane", true)] {
        let setup = move |cx: &Ctx| -> Result<(crate::registry::Setup, TensorField)> {
            if rotating_case {
                rotating(cx)
            } else {
                let s = cx.setup("expanding_sphere")?;
                let w = radial(s.param("c"))?;
                Ok((s, w))
            }
        };
        out.push(Check::new(
            format!("evolving.{g}.commutators"),
            "∇𝒟_w T − 𝒟_w∇T = ∇T ⊚ ∇w and ∇_M𝒟_w T − 𝒟_w∇_M T = ∇T ⊚ (2C[w] + ∇_M w)",
            Some(g),
            1e-4,
            move |cx| {
                let (s, w) = setup(cx)?;
                let r = commutators(cx, &s.geometry, &w, &sample_points(&s.atlas, 8), s.time())?;
                Ok(Outcome::vectors(vec![r.ambient, r.submanifold], vec![0.0, 0.0]))
            },
        ));
        out.push(Check::new(
            format!("evolving.{g}.projector_rate"),
            "𝒟_w P = −2C[w]",
            Some(g),
            1e-6,
            move |cx| {
                let (s, w) = setup(cx)?;
                Ok(Outcome::max_error(commutators(cx, &s.geometry, &w, &sample_points(&s.atlas, 8), s.time())?.projector))
            },
        ));
        out.push(Check::new(
            format!("evolving.{g}.tangential_rate"),
            "ℙ(C[w]) = 0",
            Some(g),
            1e-6,
            move |cx| {
                let (s, w) = setup(cx)?;
                Ok(Outcome::max_error(commutators(cx, &s.geometry, &w, &sample_points(&s.atlas, 8), s.time())?.tangential_rate))
            },
        ));
    }
    out.push(Check::new(
        "evolving.expanding_sphere.tangential_pairing",
        "(∇_M T ⊚ A) ⊙ ∇_M S = (∇_M T ⊚ ℙA) ⊙ ∇_M S",
        Some("expanding_sphere"),
        1e-8,
        |cx| {
            let s = cx.setup("expanding_sphere")?;
            let mut rng = cx.rng();
            let f = random_quadratic_field(&mut rng, 3, 1, 1.0)?;
            let g = random_quadratic_field(&mut rng, 3, 1, 1.0)?;
            let a = random_quadratic_field(&mut rng, 3, 2, 1.0)?;
            Ok(Outcome::max_error(tangential_pairing_residual(&s.geometry, &f, &g, &a, &sample_points(&s.atlas, 8), s.time())?))
        },
    ));
    out
}
