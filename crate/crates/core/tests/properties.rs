use extcalc::differential::{EngineConfig, FdMode};
use extcalc::geometry::{sphere, GeometryFrame};
use extcalc::samples::{random_frame, random_tensor, random_vector};
use extcalc::Tensor;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn frame(seed: u64, n: usize, codim: usize) -> GeometryFrame {
    random_frame(&mut rng(seed), n, codim).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flat_and_row_views_agree(seed in any::<u64>(), n in 1usize..=4, q in 0usize..=4) {
        let t = random_tensor(&mut rng(seed), n, q).unwrap();
        prop_assert_eq!(t.as_slice().len(), n.pow(q as u32));
        if q > 0 {
            let rebuilt = Tensor::from_rows(&t.rows().unwrap()).unwrap();
            prop_assert_eq!(rebuilt, t);
        }
    }

    #[test]
    fn insertion_is_multilinear(seed in any::<u64>(), n in 1usize..=4, q in 1usize..=4, a in -3.0f64..3.0) {
        let mut r = rng(seed);
        let t = random_tensor(&mut r, n, q).unwrap();
        let (u, v) = (random_vector(&mut r, n), random_vector(&mut r, n));
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + y).collect();
        let lhs = t.insert_right(&w).unwrap();
        let rhs = Tensor::linear_combine(a, &t.insert_right(&u).unwrap(), 1.0, &t.insert_right(&v).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn frobenius_matches_full_evaluation(seed in any::<u64>(), n in 1usize..=3, q in 1usize..=3) {
        let mut r = rng(seed);
        let (s, t) = (random_tensor(&mut r, n, q).unwrap(), random_tensor(&mut r, n, q).unwrap());
        let brute: f64 = s.as_slice().iter().zip(t.as_slice()).map(|(a, b)| a * b).sum();
        prop_assert!((s.frobenius(&t).unwrap() - brute).abs() <= 1e-12 * (1.0 + brute.abs()));
    }

    #[test]
    fn projection_is_idempotent_and_tangential(seed in any::<u64>(), n in 2usize..=4, q in 1usize..=3) {
        let codim = 1 + (seed as usize) % (n - 1);
        let f = frame(seed, n, codim);
        let t = random_tensor(&mut rng(seed ^ 1), n, q).unwrap();
        let pt = f.project(&t).unwrap();
        prop_assert!(f.project(&pt).unwrap().distance(&pt).unwrap() <= 1e-12);
        for nrm in &f.normals {
            prop_assert!(pt.insert_right(nrm).unwrap().norm() <= 1e-12);
            prop_assert!(pt.insert_left(nrm).unwrap().norm() <= 1e-12);
        }
    }

    #[test]
    fn projectors_split_identity(seed in any::<u64>(), n in 2usize..=4) {
        let codim = 1 + (seed as usize) % (n - 1);
        let f = frame(seed, n, codim);
        let sum = f.p().add(f.n()).unwrap();
        prop_assert!(sum.distance(&Tensor::identity(n).unwrap()).unwrap() <= 1e-12);
        prop_assert!(f.p().bigcirc(f.p()).unwrap().distance(f.p()).unwrap() <= 1e-12);
        prop_assert!(f.p().bigcirc(f.n()).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn sphere_frames_have_radial_normals(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU, r in 0.5f64..3.0) {
        let g = sphere(r, EngineConfig::new(FdMode::Analytic)).unwrap();
        let x = [r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos()];
        let f = g.frame_at(&x, 0.0).unwrap();
        let dot: f64 = f.normals[0].iter().zip(&x).map(|(a, b)| a * b / r).sum();
        prop_assert!((dot.abs() - 1.0).abs() <= 1e-12);
    }
}
