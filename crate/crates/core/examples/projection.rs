//! Tangential projection of a rank-3 tensor on a torus, against brute-force evaluation.

use extcalc::differential::{EngineConfig, FdMode};
use extcalc::geometry::torus;
use extcalc::samples::random_tensor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extcalc::Result<()> {
    let geom = torus(2.0, 0.5, EngineConfig::new(FdMode::Analytic))?;
    let x = [2.5 * 0.3f64.cos(), 2.5 * 0.3f64.sin(), 0.0];
    let frame = geom.frame_at(&x, 0.0)?;
    println!("normal at {x:.3?}: {:.6?}", frame.normals[0]);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_tensor(&mut rng, 3, 3)?;
    let pt = frame.project(&t)?;
    let rows: Vec<Vec<f64>> = (0..3).map(|j| frame.p().row_component(j).map(|r| r.into_vec())).collect::<Result<_, _>>()?;
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let brute = t.evaluate(&[&rows[a], &rows[b], &rows[c]])?;
                let e = [0, 1, 2].map(|k| {
                    let mut v = vec![0.0; 3];
                    v[k] = 1.0;
                    v
                });
                worst = worst.max((pt.evaluate(&[&e[a], &e[b], &e[c]])? - brute).abs());
            }
        }
    }
    println!("max |ℙT(e_a,e_b,e_c) − T(Pe_a,Pe_b,Pe_c)| = {worst:.1e}");
    println!("ℙℙT − ℙT = {:.1e}", frame.project(&pt)?.distance(&pt)?);
    println!("ℙT · n = {:.1e}", pt.insert_right(&frame.normals[0])?.norm());
    Ok(())
}
