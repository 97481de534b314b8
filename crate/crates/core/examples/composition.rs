//! Composes seeded stubs `T` with `R` and the restriction `r`, and compares
//! `‖E‖` with the stub norm and with the bound `2k+1`.

use extop::ball::{certify_composition, compose_e, random_stub};
use extop::rational::ratio;

fn main() -> extop::Result<()> {
    let (ground, m, k) = (6, 2, 1);
    for seed in 0..5 {
        let stub = random_stub(ground, m, k, seed, 3)?;
        let e = compose_e(&stub, ground, None)?;
        let cert = certify_composition(&e, &ratio(1, 10))?;
        println!(
            "seed {seed}: ‖E‖ = {:<6} sup TV(T*) = {:<6} extension {} 2k+1 = {} certificate {}",
            e.norm.to_string(),
            e.stub_sup_tv.to_string(),
            e.is_extension,
            e.bound,
            cert.map_or("none".to_string(), |c| format!("≥ {}", c.certified_bound)),
        );
    }
    Ok(())
}
