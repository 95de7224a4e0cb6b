//! Row-represented tensors: construction, insertion, contraction and `⊚`.

use extcalc::samples::{random_tensor, random_vector};
use extcalc::Tensor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extcalc::Result<()> {
    let a = Tensor::from_matrix(&[vec![1.0, 2.0], vec![3.0, 4.0]])?;
    let b = Tensor::from_matrix(&[vec![5.0, 6.0], vec![7.0, 8.0]])?;
    println!("A ⊚ B = {:?}", a.bigcirc(&b)?.rows()?.iter().map(|r| r.as_slice().to_vec()).collect::<Vec<_>>());
    println!("A ⊚ I = A: {}", a.bigcirc(&Tensor::identity(2)?)?.distance(&a)? == 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = random_tensor(&mut rng, 3, 3)?;
    let (u, v) = (random_vector(&mut rng, 3), random_vector(&mut rng, 3));
    let lr = t.insert_left(&u)?.insert_right(&v)?;
    let rl = t.insert_right(&v)?.insert_left(&u)?;
    println!("rank-3 T: (u·T)·v vs u·(T·v) differ by {:.1e}", lr.distance(&rl)?);

    let s = random_tensor(&mut rng, 3, 2)?;
    let lhs = s.contract_left(&t)?.insert_right(&v)?;
    let rhs = s.contract_left(&t.insert_right(&v)?)?;
    println!("(S:T)·v vs S:(T·v) differ by {:.1e}", lhs.distance(&rhs)?);

    let p = random_tensor(&mut rng, 3, 2)?;
    let q = random_tensor(&mut rng, 3, 2)?;
    let assoc = t.bigcirc(&p)?.bigcirc(&q)?.distance(&t.bigcirc(&p.bigcirc(&q)?)?)?;
    println!("(T⊚P)⊚Q vs T⊚(P⊚Q) differ by {assoc:.1e}");
    Ok(())
}
