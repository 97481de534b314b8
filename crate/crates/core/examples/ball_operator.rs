//! The regular extension operator `R: C(S_m) → C(B⁺_1)` given by a ramp
//! partition of unity, and the maps Δ and ρ between balls.

use extop::ball::{
    delta_inverse, delta_map, lattice_point, r_apply, r_weights, rho_abs, BallPoint, RampPair,
    SignedPoint,
};
use extop::rational::{int, ratio};
use extop::{PointFunction, Subset};

fn main() -> extop::Result<()> {
    let ramp = RampPair::new(2)?;
    println!("m=2, ε = {}", ramp.epsilon());

    let z = BallPoint::unit(
        [(0, ratio(9, 20)), (1, ratio(11, 24)), (4, ratio(1, 20))]
            .into_iter()
            .collect(),
    )?;
    let w = r_weights(&z, &ramp);
    for (a, c) in w.atoms() {
        println!("  weight on {a}: {c}");
    }
    println!("  sum {}, TV {}", w.total_mass(), w.tv_norm());

    // f(χ_A / 2) = |A|
    let f: PointFunction = Subset::prefix(5)
        .subsets_up_to(2)
        .into_iter()
        .map(|a| (a, int(a.len() as i64)))
        .collect();
    println!("Rf(z) = {}", r_apply(&f, &z, &ramp)?);
    let on_lattice = lattice_point(Subset::from_members([1, 3])?, 2)?;
    println!(
        "Rf at a lattice point = {}",
        r_apply(&f, &on_lattice, &ramp)?
    );

    let v = SignedPoint::new([(0, ratio(1, 2)), (2, ratio(-2, 3))].into_iter().collect())?;
    let d = delta_map(&v, &int(1))?;
    let shown: Vec<String> = d
        .coords()
        .iter()
        .map(|(i, c)| format!("{i}: {c}"))
        .collect();
    println!(
        "Δ(v) = {{{}}}, inverse ok: {}",
        shown.join(", "),
        delta_inverse(&d) == Some(v)
    );
    println!("ρ(Δ(v)) has ℓ¹ norm {}", rho_abs(&d, &int(1))?.l1());
    Ok(())
}
