//! Free sets and block-built free chains for a seeded random set-valued map.

use extop::freeset::{
    block_free_chain, greedy_free_set, is_free_set, verify_chain_witness, SetValuedMap,
};
use extop::{GroundSet, SigmaSpace, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> extop::Result<()> {
    let ground = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut s = SetValuedMap::new();
    for a in SigmaSpace::new(GroundSet::new(ground)?, 2).points() {
        let image =
            Subset::from_members((0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..ground)))?;
        s.insert(a, image.difference(a));
    }

    if let Some(y) = greedy_free_set(&s, ground, 1, 4)? {
        println!(
            "free set for |A| ≤ 1: {y} (verified {})",
            is_free_set(&s, y, 1)
        );
    }
    match block_free_chain(&s, ground, 3, 4)? {
        Some(w) => println!(
            "free chain: {:?} (verified {})",
            w.z,
            verify_chain_witness(&s, &w.z)?
        ),
        None => println!("no free chain with blocks of 4"),
    }
    Ok(())
}
