//! The `extop` command line: argument parsing, dispatch and JSON output.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on bad input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ball::{self, BallKernelStub, RampPair};
use crate::canonical::{
    canonical_checks, canonical_kernel, limit_coefficient_grid, natural_solution_space,
};
use crate::chain::{self, BetaOrderFamily, OrderMode};
use crate::combinat::{norm_formula, verify_identity_suite};
use crate::error::Error;
use crate::freeset;
use crate::io;
use crate::kernel::ExtensionKernel;
use crate::rational::{self, Rational};
use crate::report::CheckReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "extop",
    version,
    about = "Exact extension-operator kernels on finite set lattices"
)]
pub struct Cli {
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FreeMode {
    Greedy,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BallCmd {
    Weights,
    Apply,
    Compose,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the binomial sum identities on the admissible grid.
    Identities {
        #[arg(long, default_value_t = 12)]
        limit: usize,
    },
    /// Build the canonical kernel.
    Canonical {
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Write the kernel JSON here.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Compare the operator norm with the closed formula.
        #[arg(long)]
        check_norm: bool,
    },
    /// Exhaustive checks of the canonical kernel.
    CanonicalCheck {
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Also check limit coefficients for all r up to this value.
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// Solve the naturality system on grounds up to `pmax`.
    NaturalSolve {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pmax: usize,
    },
    /// Build the chain kernel.
    Chain {
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OrderMode::Reverse)]
        orders: OrderMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read the order family from a file instead.
        #[arg(long)]
        orders_file: Option<PathBuf>,
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        emit_orders: Option<PathBuf>,
        /// Report the operator norm against `2n−2m+1`.
        #[arg(long)]
        report_norm: bool,
    },
    /// Exhaustive checks of the chain kernel.
    ChainCheck {
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OrderMode::Reverse)]
        orders: OrderMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        orders_file: Option<PathBuf>,
    },
    /// Search for free sets of a set-valued map.
    Freeset {
        #[arg(long, value_enum)]
        mode: FreeMode,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        ground: usize,
        /// Input size bound for greedy mode.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Target size for greedy mode.
        #[arg(long)]
        p: Option<usize>,
        /// Chain length for chain mode.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        block: Option<usize>,
    },
    /// Search for a lower-bound certificate on a kernel file.
    Lowerbound {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Rational,
        #[arg(long)]
        block: Option<usize>,
    },
    /// The ball operator R and the composition E.
    Ball {
        #[arg(long, value_enum)]
        cmd: BallCmd,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Ramp threshold; defaults to the midpoint of (1/(m+1), 1/m).
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        /// A point of B⁺_1 as {"idx": "p/q"}.
        #[arg(long)]
        point: Option<String>,
        /// Point function file for `apply`.
        #[arg(long)]
        function: Option<PathBuf>,
        /// Stub file for `compose`.
        #[arg(long)]
        stub: Option<PathBuf>,
        /// Ground size for `compose`.
        #[arg(long)]
        ground: Option<usize>,
        /// Generate a seeded stub with this k when no stub file is given.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        emit_stub: Option<PathBuf>,
        /// Also search for a certificate on the composed kernel.
        #[arg(long, value_parser = parse_rational)]
        certify: Option<Rational>,
    },
    /// Check that a JSON artifact survives parse and re-serialization.
    Roundtrip { path: PathBuf },
}

/// Exit status plus the JSON (or help text) to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentSystem | Error::CertificateInvalid(_) => {
                Failure::Verify(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Step = Result<(bool, Value), Failure>;

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs always serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

fn family(
    ground: usize,
    mode: OrderMode,
    seed: u64,
    file: Option<&Path>,
) -> Result<BetaOrderFamily, Failure> {
    match file {
        Some(path) => {
            let f = io::family_from_json(&read(path)?)?;
            if f.ground_size() != ground {
                return Err(Failure::Input(format!(
                    "order family covers {} elements, expected {ground}",
                    f.ground_size()
                )));
            }
            Ok(f)
        }
        None => Ok(chain::make_beta_orders(ground, mode, seed)?),
    }
}

fn kernel_summary(k: &ExtensionKernel) -> Value {
    json!({
        "ground_size": k.ground_size(),
        "m": k.m(),
        "n": k.n(),
        "points": k.entries().count(),
        "norm": k.operator_norm().to_string(),
    })
}

fn ramp(m: usize, epsilon: Option<Rational>) -> Result<RampPair, Failure> {
    Ok(match epsilon {
        Some(e) => RampPair::with_epsilon(m, e)?,
        None => RampPair::new(m)?,
    })
}

fn dispatch(command: Command) -> Step {
    match command {
        Command::Identities { limit } => {
            let reports = verify_identity_suite(limit);
            Ok((reports.iter().all(|r| r.passed()), value(&reports)))
        }
        Command::Canonical {
            ground,
            m,
            n,
            emit,
            check_norm,
        } => {
            let k = canonical_kernel(ground, m, n)?;
            if let Some(path) = &emit {
                write(path, &io::kernel_to_json(&k))?;
            }
            if check_norm {
                let norm = k.operator_norm();
                let formula = norm_formula(m, n)?;
                let equal = norm == Rational::from_integer(formula.clone());
                let formula: Value =
                    serde_json::from_str(&formula.to_string()).expect("integer literal");
                Ok((
                    equal,
                    json!({ "norm": norm.to_string(), "formula": formula, "equal": equal }),
                ))
            } else if emit.is_some() {
                Ok((true, kernel_summary(&k)))
            } else {
                let v = serde_json::from_str(&io::kernel_to_json(&k)).expect("kernel JSON");
                Ok((true, v))
            }
        }
        Command::CanonicalCheck { ground, m, n, rmax } => {
            let mut reports = canonical_checks(ground, m, n)?;
            if let Some(r) = rmax {
                reports.push(limit_coefficient_grid(r));
            }
            Ok((all_passed(&reports), value(&reports)))
        }
        Command::NaturalSolve { m, n, pmax } => {
            let system = natural_solution_space(m, n, pmax)?;
            Ok((system.contains_canonical, value(&system)))
        }
        Command::Chain {
            ground,
            m,
            n,
            orders,
            seed,
            orders_file,
            emit,
            emit_orders,
            report_norm,
        } => {
            let fam = family(ground, orders, seed, orders_file.as_deref())?;
            let k = chain::chain_kernel(ground, &fam, m, n)?;
            if let Some(path) = &emit {
                write(path, &io::kernel_to_json(&k))?;
            }
            if let Some(path) = &emit_orders {
                write(path, &io::family_to_json(&fam))?;
            }
            if report_norm {
                let r = chain::chain_norm_report(&k);
                let ok = r.norm <= rational::int(r.bound as i64);
                Ok((ok, json!({ "norm": r.norm.to_string(), "bound": r.bound })))
            } else if emit.is_some() || emit_orders.is_some() {
                Ok((true, kernel_summary(&k)))
            } else {
                let v = serde_json::from_str(&io::kernel_to_json(&k)).expect("kernel JSON");
                Ok((true, v))
            }
        }
        Command::ChainCheck {
            ground,
            m,
            n,
            orders,
            seed,
            orders_file,
        } => {
            let fam = family(ground, orders, seed, orders_file.as_deref())?;
            let reports = chain::chain_checks(&fam, m, n)?;
            Ok((all_passed(&reports), value(&reports)))
        }
        Command::Freeset {
            mode,
            map,
            ground,
            m,
            p,
            n,
            block,
        } => {
            let s = io::map_from_json(&read(&map)?)?;
            match mode {
                FreeMode::Greedy => {
                    let p = p.ok_or_else(|| Failure::Input("greedy mode needs --p".into()))?;
                    let found = freeset::greedy_free_set(&s, ground, m, p)?;
                    let verified = found.is_none_or(|y| freeset::is_free_set(&s, y, m));
                    Ok((
                        verified,
                        json!({
                            "mode": "greedy",
                            "free_set": found.map(|y| y.to_vec()),
                            "verified": verified,
                        }),
                    ))
                }
                FreeMode::Chain => {
                    let n = n.ok_or_else(|| Failure::Input("chain mode needs --n".into()))?;
                    let block = block.unwrap_or_else(|| freeset::default_block_size(ground, n));
                    let found = freeset::block_free_chain(&s, ground, n, block)?;
                    let verified = match &found {
                        Some(w) => freeset::verify_chain_witness(&s, &w.z)?,
                        None => true,
                    };
                    Ok((
                        verified,
                        json!({
                            "mode": "chain",
                            "block": block,
                            "witness": found.map(|w| w.z),
                            "verified": verified,
                        }),
                    ))
                }
            }
        }
        Command::Lowerbound {
            kernel,
            epsilon,
            block,
        } => {
            let k = io::kernel_from_json(&read(&kernel)?)?;
            let cert = freeset::lower_bound_certificate(&k, &epsilon, block)?;
            Ok((
                true,
                json!({ "certificate": cert.as_ref().map(io::certificate_to_value) }),
            ))
        }
        Command::Ball {
            cmd,
            m,
            epsilon,
            point,
            function,
            stub,
            ground,
            k,
            seed,
            emit_stub,
            certify,
        } => match cmd {
            BallCmd::Weights | BallCmd::Apply => {
                let ramp = ramp(m, epsilon)?;
                let text = point.ok_or_else(|| Failure::Input("--point is required".into()))?;
                let z = io::ball_point_from_json(&text)?;
                let weights = ball::r_weights(&z, &ramp);
                if cmd == BallCmd::Weights {
                    return Ok((
                        true,
                        json!({
                            "epsilon": rational::to_wire(ramp.epsilon()),
                            "support": ball::support_f(&z, &ramp).to_vec(),
                            "weights": io::measure_to_value(&weights),
                            "sum": rational::to_wire(&weights.total_mass()),
                            "tv_norm": rational::to_wire(&weights.tv_norm()),
                        }),
                    ));
                }
                let path =
                    function.ok_or_else(|| Failure::Input("--function is required".into()))?;
                let f = io::function_from_json(&read(&path)?)?;
                let v = ball::r_apply(&f, &z, &ramp)?;
                Ok((true, json!({ "value": rational::to_wire(&v) })))
            }
            BallCmd::Compose => {
                let ground = ground.ok_or_else(|| Failure::Input("--ground is required".into()))?;
                let stub: BallKernelStub = match (&stub, k) {
                    (Some(path), _) => io::stub_from_json(&read(path)?)?,
                    (None, Some(k)) => ball::random_stub(ground, m, k, seed, 3)?,
                    (None, None) => return Err(Failure::Input("give --stub or --k".into())),
                };
                if let Some(path) = &emit_stub {
                    write(path, &io::stub_to_json(&stub))?;
                }
                let ramp = ramp(stub.m, epsilon)?;
                let r = ball::compose_e(&stub, ground, Some(ramp))?;
                let certificate = match &certify {
                    Some(eps) => ball::certify_composition(&r, eps)?
                        .as_ref()
                        .map(io::certificate_to_value),
                    None => None,
                };
                let ok = r.norm <= r.stub_sup_tv;
                Ok((
                    ok,
                    json!({
                        "norm": rational::to_wire(&r.norm),
                        "stub_sup_tv": rational::to_wire(&r.stub_sup_tv),
                        "norm_within_stub": ok,
                        "is_extension": r.is_extension,
                        "bound": r.bound,
                        "hypotheses": {
                            "m_exceeds_k": r.m_exceeds_k,
                            "k_exceeds_stub_norm": r.k_exceeds_stub_norm,
                            "mu_exceeds_one_plus_k_over_m": r.mu_exceeds_one_plus_k_over_m,
                        },
                        "certificate": certificate,
                    }),
                ))
            }
        },
        Command::Roundtrip { path } => {
            let report = io::roundtrip(&read(&path)?)?;
            Ok((report.stable, value(&report)))
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: EXIT_OK,
                    output: e.to_string(),
                };
            }
            let msg = e.render().to_string();
            return error_outcome(EXIT_INPUT, msg.trim());
        }
    };
    let (code, body) = match dispatch(cli.command) {
        Ok((ok, v)) => (if ok { EXIT_OK } else { EXIT_VERIFY }, v),
        Err(Failure::Input(msg)) => (EXIT_INPUT, json!({ "error": msg })),
        Err(Failure::Verify(msg)) => (EXIT_VERIFY, json!({ "error": msg })),
    };
    let output = serde_json::to_string_pretty(&body).expect("JSON value");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &output) {
            return error_outcome(EXIT_INPUT, &format!("{}: {e}", path.display()));
        }
    }
    Outcome { code, output }
}

fn error_outcome(code: i32, msg: &str) -> Outcome {
    Outcome {
        code,
        output: serde_json::to_string_pretty(&json!({ "error": msg })).expect("JSON value"),
    }
}
