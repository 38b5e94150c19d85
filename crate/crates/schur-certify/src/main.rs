//! Command-line front end: planners, exact acceptance probabilities,
//! simulated certifications, bound checks, parameter sweeps, and tomography
//! risk, all with machine-readable JSON/CSV output.
//!
//! Exit codes: 0 success, 2 usage, 3 bad input data, 4 resource guard.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use schur_certify::certification::{self, TesterKind, TesterPlan};
use schur_certify::characters;
use schur_certify::monte_carlo;
use schur_certify::partitions::{self, Partition};
use schur_certify::tomography::{self, RiskRegime};
use schur_certify::unitary::EigenPhases;
use schur_certify::{Error, UnitaryMatrix, DEFAULT_SEED};

const EXIT_USAGE: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;
const EXIT_GUARD: u8 = 4;

#[derive(Parser)]
#[command(
    name = "schur-certify",
    version,
    about = "Ancilla-free certification of unitary processes: query planners, exact acceptance probabilities, soundness bounds, sweeps, and tomography risk",
    after_help = "Seed resolution: --seed flag, else SCHUR_CERTIFY_SEED env var, else 0xC0FFEE.\nMatrix inputs are JSON files ({\"d\":2,\"entries\":[[re,im],...]}, row-major); inline JSON is accepted for d <= 4.\nExit codes: 0 success, 2 usage, 3 bad input data, 4 resource guard."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    QubitKnownV,
    QubitSwapPair,
    QuditKnownV,
    QuditSwapPair,
}

impl From<KindArg> for TesterKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::QubitKnownV => TesterKind::QubitKnownV,
            KindArg::QubitSwapPair => TesterKind::QubitSwapPair,
            KindArg::QuditKnownV => TesterKind::QuditKnownV,
            KindArg::QuditSwapPair => TesterKind::QuditSwapPair,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Geometric,
    Bialternant,
    JacobiTrudi,
    Ssyt,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tester query plan for a kind, dimension, and accuracy
    Plan {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// System dimension (2 for qubit kinds)
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Exact acceptance probability of the tester on U against V
    Prob {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        eps: f64,
        /// Override the planner's copies-per-round (qubit kinds)
        #[arg(long)]
        n: Option<u64>,
        /// Override the planner's staircase step (qudit kinds, odd)
        #[arg(long)]
        s: Option<u64>,
        /// Unknown unitary U: file path or inline JSON
        #[arg(long)]
        matrix_u: String,
        /// Target unitary V: file path or inline JSON
        #[arg(long)]
        matrix_v: String,
    },
    /// Run seeded Bernoulli trials at the exact probability and decide
    Certify {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        matrix_u: String,
        #[arg(long)]
        matrix_v: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Worst-case acceptance over adversarial instances on an ε grid
    Sweep {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Comma-separated ε values in (0,1]
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        /// Adversarial instances per grid point (d > 2)
        #[arg(long, default_value_t = 10)]
        per_point: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Soundness-bound values: qubit chain, pair threshold, Dirichlet check
    Bounds {
        /// Copies per round
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: f64,
        /// Include the pair-separation threshold for this dimension
        #[arg(long)]
        d: Option<usize>,
        /// Include |sin(sx)| ≤ s|sin x| scanned on a 10⁴-point grid (odd s)
        #[arg(long)]
        s: Option<u64>,
    },
    /// Tomography risk bound for n uses, or the minimal n for a target ε
    Risk {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: Option<u64>,
        /// Target infidelity: plans the minimal n
        #[arg(long)]
        eps: Option<f64>,
        /// Evaluate the finite partition sum instead of the closed form
        #[arg(long)]
        finite_sum: bool,
    },
    /// Evaluate the irrep character χ_λ at given eigenphases
    Character {
        /// Partition parts, comma-separated (e.g. 2,1)
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<u64>,
        /// Eigenphases in radians, comma-separated; their count sets d
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        phases: Vec<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Exact Schur-Weyl dimensions, entropy bounds, and ancilla need
    Dims {
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<u64>,
        /// Length bound (defaults to the number of parts given)
        #[arg(long)]
        d: Option<usize>,
    },
}

/// Error carrying the process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn bad_input(message: impl Into<String>) -> Self {
        Self { code: EXIT_BAD_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::OracleTooLarge { .. } | Error::EnumerationGuard { .. } => EXIT_GUARD,
            Error::NotUnitary { .. } | Error::ReconstructionFailed { .. } => EXIT_BAD_INPUT,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SCHUR_CERTIFY_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::usage(format!("SCHUR_CERTIFY_SEED is not a u64: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load_matrix(arg: &str) -> Result<UnitaryMatrix<f64>, CliError> {
    let trimmed = arg.trim_start();
    let (source, inline) = if trimmed.starts_with('{') {
        (trimmed.to_string(), true)
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| CliError::bad_input(format!("cannot read matrix file {arg}: {e}")))?;
        (text, false)
    };
    let matrix: UnitaryMatrix<f64> = serde_json::from_str(&source)
        .map_err(|e| CliError::bad_input(format!("malformed matrix JSON: {e}")))?;
    if inline && matrix.d() > 4 {
        return Err(CliError::usage("inline matrices are limited to d ≤ 4; use a file"));
    }
    Ok(matrix)
}

fn build_plan(kind: KindArg, d: usize, eps: f64, n: Option<u64>, s: Option<u64>) -> Result<TesterPlan<f64>, CliError> {
    let mut plan = certification::plan(kind.into(), d, eps)?;
    if let Some(n) = n {
        plan = plan.override_n(n)?;
    }
    if let Some(s) = s {
        plan = plan.override_s(s)?;
    }
    Ok(plan)
}

fn to_json<S: serde::Serialize>(value: &S) -> String {
    serde_json::to_string(value).expect("report types serialize")
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Plan { kind, d, eps } => {
            let plan = certification::plan::<f64>(kind.into(), d, eps)?;
            Ok(to_json(&plan))
        }
        Command::Prob { kind, d, eps, n, s, matrix_u, matrix_v } => {
            let plan = build_plan(kind, d, eps, n, s)?;
            let u = load_matrix(&matrix_u)?;
            let v = load_matrix(&matrix_v)?;
            let report = if plan.kind.is_swap() {
                certification::accept_prob_swap(&u, &v, &plan)?
            } else {
                certification::accept_prob_known(&u, &v, &plan)?
            };
            Ok(to_json(&json!({ "plan": plan, "report": report })))
        }
        Command::Certify { kind, d, eps, n, s, matrix_u, matrix_v, trials, seed } => {
            if trials == 0 {
                return Err(CliError::usage("--trials must be at least 1"));
            }
            let plan = build_plan(kind, d, eps, n, s)?;
            let u = load_matrix(&matrix_u)?;
            let v = load_matrix(&matrix_v)?;
            let seed = resolve_seed(seed)?;
            let stats = monte_carlo::run_trials(&u, &v, &plan, trials, seed)?;
            // accept/reject by majority against the 1/3–2/3 promise gap
            let decision = if stats.p_hat >= 0.5 { "accept" } else { "reject" };
            Ok(to_json(&json!({ "decision": decision, "stats": stats })))
        }
        Command::Sweep { kind, d, grid, per_point, seed, format } => {
            let seed = resolve_seed(seed)?;
            let table = monte_carlo::sweep_distance(kind.into(), d, &grid, per_point, seed)?;
            Ok(match format {
                FormatArg::Csv => table.to_csv().trim_end().to_string(),
                FormatArg::Json => table.to_json(),
            })
        }
        Command::Bounds { n, eps, d, s } => {
            if n < 2 {
                return Err(CliError::usage("--n must be at least 2"));
            }
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(Error::EpsilonOutOfRange { epsilon: eps }.into());
            }
            let ratio = certification::soundness_bound_qubit(n, eps);
            let mut payload = json!({
                "n": n,
                "eps": eps,
                "qubit_ratio_bound": ratio,
                "qubit_p_bound": ratio * ratio,
            });
            let map = payload.as_object_mut().expect("payload is an object");
            if let Some(d) = d {
                if d < 2 {
                    return Err(CliError::usage("--d must be at least 2"));
                }
                let threshold = d as f64 * (2.0 * eps * eps - eps.powi(4)) / (2.0 * (d - 1) as f64);
                map.insert("pair_threshold".into(), json!(threshold));
            }
            if let Some(s) = s {
                let mut holds = true;
                for k in 0..10_000 {
                    let x = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / 9_999.0;
                    if !certification::dirichlet_bound_check(s, x)? {
                        holds = false;
                        break;
                    }
                }
                map.insert("dirichlet_holds".into(), json!(holds));
                map.insert("per_pair_factor".into(), json!(2.0 / (s as f64 * eps)));
            }
            Ok(to_json(&payload))
        }
        Command::Risk { d, n, eps, finite_sum } => {
            if d < 2 {
                return Err(CliError::usage("--d must be at least 2"));
            }
            match (n, eps) {
                (Some(n), None) => {
                    if n < 1 {
                        return Err(CliError::usage("--n must be at least 1"));
                    }
                    let regime = if finite_sum { RiskRegime::FiniteSum } else { RiskRegime::ClosedForm };
                    let profile = tomography::RiskProfile::<f64>::new(n, d, regime)?;
                    Ok(to_json(&profile))
                }
                (None, Some(eps)) => {
                    let n = tomography::plan_queries_tomography(d, eps)?;
                    let profile = tomography::RiskProfile::<f64>::new(n, d, RiskRegime::ClosedForm)?;
                    Ok(to_json(&json!({ "epsilon": eps, "plan": profile })))
                }
                _ => Err(CliError::usage("risk needs exactly one of --n or --eps")),
            }
        }
        Command::Character { partition, phases, method } => {
            let d = phases.len();
            let lambda = Partition::new(&partition, d)
                .map_err(|e| CliError::usage(format!("bad --partition: {e}")))?;
            let eigen = EigenPhases::from_phases(&phases);
            let value = match method {
                MethodArg::Auto => match characters::char_bialternant(&lambda, &eigen) {
                    Ok(c) => c,
                    Err(Error::DegenerateSpectrum { .. }) => characters::char_jacobi_trudi(&lambda, &eigen)?,
                    Err(e) => return Err(e.into()),
                },
                MethodArg::Bialternant => characters::char_bialternant(&lambda, &eigen)?,
                MethodArg::JacobiTrudi => characters::char_jacobi_trudi(&lambda, &eigen)?,
                MethodArg::Ssyt => characters::char_ssyt_oracle(&lambda, &eigen)?,
                MethodArg::Geometric => {
                    if let Some(step) = lambda.staircase_step() {
                        characters::char_staircase(&eigen, step)
                    } else if d == 2 && lambda.parts().len() == 2 && lambda.parts()[1] == 1 {
                        characters::char_spin(&eigen, lambda.n())?
                    } else {
                        return Err(CliError::usage(
                            "geometric evaluation needs a staircase shape or (n−1,1) with d = 2",
                        ));
                    }
                }
            };
            let mut payload = serde_json::to_value(&value).expect("character serializes");
            let abs = value.value.norm();
            payload
                .as_object_mut()
                .expect("character payload is an object")
                .insert("abs".into(), json!(abs));
            Ok(to_json(&payload))
        }
        Command::Dims { partition, d } => {
            let d = d.unwrap_or(partition.len().max(1));
            let lambda = Partition::new(&partition, d)
                .map_err(|e| CliError::usage(format!("bad --partition: {e}")))?;
            let dims = partitions::partition_dims::<f64>(&lambda);
            let bounds = partitions::dim_bounds::<f64>(&lambda);
            let ancilla = certification::ancilla_requirement(&lambda);
            Ok(to_json(&json!({
                "lambda": lambda,
                "dims": dims,
                "bounds": bounds,
                "ancilla": ancilla,
            })))
        }
    }
}
