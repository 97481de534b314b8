use std::io::Write;

fn main() {
    let outcome = extop::cli::run(std::env::args_os());
    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.output);
    std::process::exit(outcome.code);
}
