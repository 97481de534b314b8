//! Writes kernels, order families and stubs as JSON and round-trips them.

use extop::ball::random_stub;
use extop::canonical::canonical_kernel;
use extop::chain::{make_beta_orders, OrderMode};
use extop::io;

fn main() -> extop::Result<()> {
    let kernel = io::kernel_to_json(&canonical_kernel(2, 1, 2)?);
    println!("{kernel}");
    let family = io::family_to_json(&make_beta_orders(4, OrderMode::Random, 3)?);
    println!("{family}");
    let stub = io::stub_to_json(&random_stub(2, 1, 1, 0, 2)?);

    for text in [&kernel, &family, &stub] {
        let r = io::roundtrip(text)?;
        println!(
            "{:?}: stable {}, canonical {}",
            r.kind, r.stable, r.canonical_input
        );
    }

    let edited = kernel.replacen("\"coeff\": \"1/1\"", "\"coeff\": \"0/1\"", 1);
    let (_, canon) = io::canonicalize(&edited)?;
    println!("zero coefficient dropped: {}", !canon.contains("0/1"));
    Ok(())
}
