//! Builds canonical kernels, compares their norms with the closed form and
//! shows that restricting to a subset gives the canonical kernel again.

use extop::canonical::{canonical_kernel, canonical_measure, continuity_pushforward_check};
use extop::combinat::norm_formula;
use extop::{Rational, Subset};

fn main() -> extop::Result<()> {
    let a = Subset::from_members([0, 1, 2])?;
    println!("φ(χ_{{0,1,2}}) for m=1:");
    for (atom, coeff) in canonical_measure(a, 1).atoms() {
        println!("  {coeff:>3} · δ_{atom}");
    }

    for n in 2..=5 {
        for m in 1..n {
            let k = canonical_kernel(n, m, n)?;
            let formula = Rational::from_integer(norm_formula(m, n)?);
            println!(
                "m={m} n={n}: ‖T‖ = {} (formula {formula})",
                k.operator_norm()
            );
            assert_eq!(k.operator_norm(), formula);
        }
    }

    let k = canonical_kernel(6, 2, 3)?;
    let y = Subset::from_members([1, 3, 4, 5])?;
    assert_eq!(k.restrict(y)?, canonical_kernel(4, 2, 3)?);
    println!("restriction to {y} is canonical on 4 points");

    let b = Subset::from_members([0, 2])?;
    assert!(continuity_pushforward_check(&k, a, b)?);
    println!("pushforward along C ↦ C∩{b} sends φ({a}) to φ({b})");
    Ok(())
}
