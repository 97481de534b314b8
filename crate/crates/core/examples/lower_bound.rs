//! Certifies `‖T‖ ≥ (2n−2m+1)(1−3ε′)` for a kernel by exhibiting a point
//! whose measure has the prescribed masses on disjoint regions.

use extop::canonical::canonical_kernel;
use extop::chain::{chain_kernel, make_beta_orders, OrderMode};
use extop::freeset::lower_bound_certificate;
use extop::rational::ratio;

fn main() -> extop::Result<()> {
    let eps = ratio(1, 10);
    let family = make_beta_orders(12, OrderMode::Reverse, 0)?;
    let kernels = [
        (
            "chain m=2 n=3 on 12 points",
            chain_kernel(12, &family, 2, 3)?,
        ),
        (
            "canonical m=1 n=3 on 10 points",
            canonical_kernel(10, 1, 3)?,
        ),
    ];
    for (name, k) in kernels {
        match lower_bound_certificate(&k, &eps, None)? {
            Some(c) => {
                println!("{name}: witness {:?}", c.witness.z);
                println!(
                    "  ε′ = {}, certified ‖T‖ ≥ {}, TV = {}",
                    c.epsilon_prime, c.certified_bound, c.tv_norm
                );
                for r in &c.regions {
                    println!(
                        "  {:?}: mass {} (target {} ± {})",
                        r.region, r.mass, r.target, r.tolerance
                    );
                }
            }
            None => println!("{name}: no certificate"),
        }
    }
    Ok(())
}
