//! The chain operator built from β-orders: its norm, a witness, and the
//! lateness condition under which it is continuous.

use extop::chain::{
    chain_kernel, chain_norm_report, is_late, late_continuity_check, make_beta_orders, OrderMode,
};
use extop::Subset;

fn main() -> extop::Result<()> {
    let family = make_beta_orders(12, OrderMode::Reverse, 0)?;
    for (m, n) in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5)] {
        let k = chain_kernel(12, &family, m, n)?;
        let r = chain_norm_report(&k);
        println!(
            "m={m} n={n}: ‖T‖ = {} ≤ {}, attained at {:?}",
            r.norm, r.bound, r.witness
        );
    }

    for seed in 0..3 {
        let family = make_beta_orders(8, OrderMode::Random, seed)?;
        let r = chain_norm_report(&chain_kernel(8, &family, 2, 4)?);
        println!("random orders, seed {seed}: ‖T‖ = {}", r.norm);
    }

    let family = make_beta_orders(10, OrderMode::Natural, 0)?;
    let b = Subset::from_members([2, 7])?;
    let c = Subset::from_members([5])?;
    println!("B={b}, C={c}: late = {}", is_late(&family, b, c));
    if is_late(&family, b, c) {
        println!(
            "continuity holds: {}",
            late_continuity_check(&family, 2, 3, b, c)?
        );
    }
    Ok(())
}
