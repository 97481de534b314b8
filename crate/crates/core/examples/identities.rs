//! Exhaustively checks the eight binomial sum identities.
//!
//!     cargo run --example identities -- 10

use extop::combinat::{norm_formula, phi, psi, theta, verify_identity_suite};

fn main() -> extop::Result<()> {
    let limit = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);

    println!("Θ(1,2,3,2,1) = {}", theta(1, 2, 3, 2, 1)?);
    println!("Φ(1,1,2) = {}, Ψ(1,2,3) = {}", phi(1, 1, 2)?, psi(1, 2, 3)?);
    for n in 2..=6 {
        let row: Vec<String> = (1..n)
            .map(|m| norm_formula(m, n).unwrap().to_string())
            .collect();
        println!("‖canonical‖ for n={n}, m=1..{}: {}", n - 1, row.join(" "));
    }

    for report in verify_identity_suite(limit) {
        println!(
            "{:<7} {:>8} cases  {}",
            report.name,
            report.cases,
            if report.passed() { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
