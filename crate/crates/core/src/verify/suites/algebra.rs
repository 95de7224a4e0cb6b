use rand::Rng;

use crate::applications::sample_points;
use crate::error::Result;
use crate::samples::{random_frame, random_tensor, random_vector};
use crate::tensor::{unit_vector, Tensor};
use crate::verify::{Check, Outcome};

use super::targets;

const TRIALS: usize = 1000;

pub(super) fn tensor_algebra() -> Vec<Check> {
    vec![
        Check::new("tensor-algebra.insertion_commutation", "(T(u))·v = (T·v)(u)", None, 1e-12, |cx| {
            let mut rng = cx.rng();
            let mut worst: f64 = 0.0;
            for _ in 0..TRIALS {
                let (n, q) = (rng.gen_range(1..=4), rng.gen_range(2..=4));
                let t = random_tensor(&mut rng, n, q)?;
                let (u, v) = (random_vector(&mut rng, n), random_vector(&mut rng, n));
                let a = t.insert_left(&u)?.insert_right(&v)?;
                let b = t.insert_right(&v)?.insert_left(&u)?;
                worst = worst.max(a.distance(&b)?);
            }
            Ok(Outcome::max_error(worst))
        }),
        Check::new("tensor-algebra.contraction_associativity", "(S:T)·v = S:(T·v)", None, 1e-12, |cx| {
            let mut rng = cx.rng();
            let mut worst: f64 = 0.0;
            for _ in 0..TRIALS {
                let n = rng.gen_range(1..=4);
                let q = rng.gen_range(1..=4);
                let p = rng.gen_range(0..q);
                let s = random_tensor(&mut rng, n, p)?;
                let t = random_tensor(&mut rng, n, q)?;
                let v = random_vector(&mut rng, n);
                let a = s.contract_left(&t)?.insert_right(&v)?;
                let b = s.contract_left(&t.insert_right(&v)?)?;
                worst = worst.max(a.distance(&b)?);
            }
            Ok(Outcome::max_error(worst))
        }),
        Check::new("tensor-algebra.bigcirc_associativity", "(T ⊚ A) ⊚ B = T ⊚ (A ⊚ B)", None, 1e-12, |cx| {
            let mut rng = cx.rng();
            let mut worst: f64 = 0.0;
            let mut done = 0;
            while done < TRIALS {
                let n = rng.gen_range(1..=4);
                let (q, a, b) = (rng.gen_range(1..=4), rng.gen_range(2..=3), rng.gen_range(1..=3));
                if q + a + b > 8 {
                    continue;
                }
                let t = random_tensor(&mut rng, n, q)?;
                let ta = random_tensor(&mut rng, n, a)?;
                let tb = random_tensor(&mut rng, n, b)?;
                let lhs = t.bigcirc(&ta)?.bigcirc(&tb)?;
                let rhs = t.bigcirc(&ta.bigcirc(&tb)?)?;
                worst = worst.max(lhs.distance(&rhs)?);
                done += 1;
            }
            Ok(Outcome::max_error(worst))
        }),
        Check::new("tensor-algebra.frobenius_projection", "S ⊙ T = S ⊙ ℙT for tangential S", None, 1e-12, |cx| {
            let mut rng = cx.rng();
            let mut worst: f64 = 0.0;
            for _ in 0..TRIALS {
                let n = rng.gen_range(2..=4);
                let codim = rng.gen_range(1..n);
                let frame = random_frame(&mut rng, n, codim)?;
                let q = rng.gen_range(1..=4);
                let s = frame.project(&random_tensor(&mut rng, n, q)?)?;
                let t = random_tensor(&mut rng, n, q)?;
                worst = worst.max((s.frobenius(&t)? - s.frobenius(&frame.project(&t)?)?).abs());
            }
            Ok(Outcome::max_error(worst))
        }),
        Check::new("tensor-algebra.row_representation", "T = Σ e^k ⊗ T^k and T^k = T(e_k)", None, 1e-15, |cx| {
            let mut rng = cx.rng();
            let mut worst: f64 = 0.0;
            for _ in 0..TRIALS {
                let (n, q) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                let t = random_tensor(&mut rng, n, q)?;
                let rows = t.rows()?;
                worst = worst.max(Tensor::from_rows(&rows)?.distance(&t)?);
                for (k, r) in rows.iter().enumerate() {
                    worst = worst.max(t.insert_left(&unit_vector(n, k))?.distance(r)?);
                }
            }
            Ok(Outcome::max_error(worst))
        }),
    ]
}

/// `T(Pe_{i1}, …, Pe_{iq})` for every index tuple.
fn brute_force_projection(t: &Tensor, p_rows: &[Vec<f64>]) -> Result<Tensor> {
    let n = t.dim();
    Tensor::from_fn(n, t.rank(), |idx| {
        let args: Vec<&[f64]> = idx.iter().map(|&i| p_rows[i].as_slice()).collect();
        t.evaluate(&args).unwrap_or(f64::NAN)
    })
}

pub(super) fn projection(selected: Option<&str>) -> Vec<Check> {
    let mut out = Vec::new();
    for g in targets(selected, &["sphere", "torus", "circle3d", "helix_segment"], |_| true) {
        out.push(Check::new(
            format!("projection.{g}.brute_force"),
            "ℙT equals T evaluated on projected basis tuples",
            Some(g),
            1e-12,
            move |cx| {
                let s = cx.setup(g)?;
                let mut rng = cx.rng();
                let mut worst: f64 = 0.0;
                for x in sample_points(&s.atlas, 12) {
                    let frame = s.geometry.frame_at(&x, s.time())?;
                    let n = frame.dim();
                    let p_rows: Vec<Vec<f64>> = (0..n).map(|i| frame.project_vector(&unit_vector(n, i))).collect();
                    for q in 1..=3 {
                        let t = random_tensor(&mut rng, n, q)?;
                        worst = worst.max(frame.project(&t)?.distance(&brute_force_projection(&t, &p_rows)?)?);
                    }
                }
                Ok(Outcome::max_error(worst))
            },
        ));
        out.push(Check::new(
            format!("projection.{g}.idempotent_and_tangential"),
            "ℙℙT = ℙT, ℙP = P and ℙT(n_i) = 0 in every slot",
            Some(g),
            1e-12,
            move |cx| {
                let s = cx.setup(g)?;
                let mut rng = cx.rng();
                let mut worst: f64 = 0.0;
                for x in sample_points(&s.atlas, 12) {
                    let frame = s.geometry.frame_at(&x, s.time())?;
                    let n = frame.dim();
                    worst = worst.max(frame.project(frame.p())?.distance(frame.p())?);
                    worst = worst.max(frame.project(frame.n())?.norm());
                    for q in 1..=3 {
                        let pt = frame.project(&random_tensor(&mut rng, n, q)?)?;
                        worst = worst.max(frame.project(&pt)?.distance(&pt)?);
                        for normal in &frame.normals {
                            worst = worst.max(pt.insert_left(normal)?.norm());
                            worst = worst.max(pt.insert_right(normal)?.norm());
                        }
                    }
                }
                Ok(Outcome::max_error(worst))
            },
        ));
    }
    out
}
