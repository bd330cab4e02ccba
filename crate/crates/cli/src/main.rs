//! `gaugenorm`: s-numbers, norms, duals, dominance, the invariant harness
//! and the `M_2` extreme-point tools from the command line.
//!
//! Exit codes: 0 success, 1 not dominated, 2 parse or input error,
//! 3 numerical failure, 4 unsupported operation, 5 dimension mismatch,
//! 6 invariant failure.

mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaugenorm::dominance::kyfan_dominates;
use gaugenorm::duality::{dual_mat_report, dual_vec_report};
use gaugenorm::extreme2::{decompose, lp_density_check, uniform_grid};
use gaugenorm::harness::{self, HarnessConfig, Suite};
use gaugenorm::linalg::{mu_step, s_numbers};
use gaugenorm::{norm_mat, norm_vec, Error, Param};
use serde_json::{json, Value};

use input::{load_matrix, load_operand, load_profile, load_spec, Operand};

/// Tolerance of the `L^p` density identity.
const LP_DENSITY_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "gaugenorm", version, about = "Unitarily invariant norms on matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the s-numbers of a matrix and the step function mu_s(T).
    Snumbers {
        /// Matrix JSON file (or inline JSON).
        matrix: String,
    },
    /// Evaluate a norm (or its dual) on a matrix or vector.
    Norm {
        /// Norm spec JSON file (or inline JSON).
        spec: String,
        /// Matrix, or {"vector": [...]}; not needed with --profile.
        operand: Option<String>,
        /// Print the dual norm instead.
        #[arg(long, conflicts_with = "profile")]
        dual: bool,
        /// Print the profile s -> |||diag(1, s)||| on M_2 as CSV.
        #[arg(long)]
        profile: bool,
    },
    /// Ky Fan dominance of S by T; exit 1 if S is not dominated.
    Dominance {
        /// Matrix S.
        s: String,
        /// Matrix T.
        t: String,
    },
    /// Run the seeded invariant suites.
    Proptest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// axioms, duality, dominance, extreme2 or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Where the first failing case is written.
        #[arg(long, default_value = "gaugenorm-witness.json")]
        witness_out: PathBuf,
        #[arg(long, hide = true)]
        inject_bug: bool,
    },
    /// Decompose an M_2 profile (or the profile of a spec) into <t>-norm atoms.
    Decompose {
        /// Profile JSON or norm spec JSON.
        profile: String,
    },
    /// Check the L^p density identity over a uniform s-grid.
    Lpcheck {
        /// Exponent p > 1; "3/2" is read exactly.
        #[arg(long)]
        p: String,
        /// Number of grid points in [0, 1].
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: String) -> Self {
        Failure { code, message }
    }

    pub fn parse(message: String) -> Self {
        Failure::new(2, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow | Error::NotHermitian(_) | Error::NoConvergence(_) | Error::LinearProgram(_) => 3,
            Error::Unsupported(_) | Error::TooLarge { .. } => 4,
            Error::DimensionMismatch { .. } => 5,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

/// JSON text plus the exit code to finish with.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn json(v: &Value) -> Self {
        Output {
            text: serde_json::to_string_pretty(v).expect("serializable report") + "\n",
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Snumbers { matrix } => {
            let t = load_matrix(&matrix)?;
            let s = s_numbers(&t)?;
            let mu = mu_step(&t)?;
            Ok(Output::json(&json!({ "s": s.as_slice(), "mu": mu })))
        }
        Command::Norm {
            spec,
            operand,
            dual,
            profile,
        } => {
            let spec = load_spec(&spec)?;
            if profile {
                let p = gaugenorm::extreme2::profile_of(&spec)?;
                return Ok(Output {
                    text: p.to_csv(),
                    code: 0,
                });
            }
            let operand = operand.ok_or_else(|| Failure::parse("missing matrix or vector operand".into()))?;
            let operand = load_operand(&operand)?;
            if dual {
                let r = match &operand {
                    Operand::Matrix(t) => dual_mat_report(&spec, t)?,
                    Operand::Vector(x) => dual_vec_report(&spec, x)?,
                };
                return Ok(Output::json(&json!({
                    "norm": r.dual,
                    "primal": r.primal,
                    "dual": r.dual,
                    "witness": r.witness,
                })));
            }
            let value = match &operand {
                Operand::Matrix(t) => norm_mat(&spec, t)?,
                Operand::Vector(x) => norm_vec(&spec, x)?,
            };
            Ok(Output::json(&json!({ "norm": value })))
        }
        Command::Dominance { s, t } => {
            let (s, t) = (load_matrix(&s)?, load_matrix(&t)?);
            let v = kyfan_dominates(&t, &s)?;
            let margins: Vec<f64> = v
                .partial_sums_t
                .iter()
                .zip(&v.partial_sums_s)
                .map(|(a, b)| a - b)
                .collect();
            let mut report = serde_json::to_value(&v).expect("serializable verdict");
            report["margins"] = json!(margins);
            let mut out = Output::json(&report);
            out.code = if v.dominates { 0 } else { 1 };
            Ok(out)
        }
        Command::Proptest {
            seed,
            trials,
            suite,
            witness_out,
            inject_bug,
        } => {
            let seed = match std::env::var("GAUGENORM_SEED") {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Failure::parse(format!("GAUGENORM_SEED is not a u64: {s:?}")))?,
                Err(_) => seed,
            };
            let suite: Suite = suite.parse()?;
            let mut cfg = HarnessConfig::new(seed, trials, suite);
            cfg.inject_triangle_bug = inject_bug;
            let report = harness::run(&cfg)?;
            let mut out = Output::json(&serde_json::to_value(&report).expect("serializable report"));
            if let Some(w) = &report.witness {
                let text = serde_json::to_string_pretty(w).expect("serializable witness");
                fs::write(&witness_out, text + "\n").map_err(|e| {
                    Failure::new(6, format!("invariant failure; cannot write witness {}: {e}", witness_out.display()))
                })?;
                eprintln!(
                    "invariant failure in {}/{}; witness written to {}",
                    w.suite,
                    w.check,
                    witness_out.display()
                );
                out.code = 6;
            }
            Ok(out)
        }
        Command::Decompose { profile } => {
            let p = load_profile(&profile)?;
            let mu = decompose(&p)?;
            Ok(Output::json(&serde_json::to_value(&mu).expect("serializable measure")))
        }
        Command::Lpcheck { p, grid } => {
            let p: Param = p.parse()?;
            if grid == 0 {
                return Err(Failure::parse("grid needs at least one point".into()));
            }
            let rep = lp_density_check(p.to_f64(), &uniform_grid(grid))?;
            let mut out = Output::json(&serde_json::to_value(&rep).expect("serializable report"));
            if rep.max_error.is_nan() || rep.max_error > LP_DENSITY_TOL {
                eprintln!("max error {:e} exceeds {LP_DENSITY_TOL:e}", rep.max_error);
                out.code = 6;
            }
            Ok(out)
        }
    }
}
