//! Solves the naturality system and shows that its solution space collapses
//! to the canonical operator as more ground sizes are constrained.

use extop::canonical::{limit_coefficient_grid, natural_solution_space};

fn main() -> extop::Result<()> {
    for (m, n) in [(1, 2), (1, 3), (2, 3)] {
        for pmax in n..=n + 2 {
            let system = natural_solution_space(m, n, pmax)?;
            println!(
                "m={m} n={n} p≤{pmax}: {} unknowns, {} equations, rank {}, dim {}, canonical {}",
                system.unknowns,
                system.equations,
                system.rank,
                system.dim,
                system.contains_canonical
            );
        }
    }
    let grid = limit_coefficient_grid(8);
    println!(
        "limit coefficients, r ≤ 8: {} cases, {} failed",
        grid.cases, grid.failed
    );
    Ok(())
}
