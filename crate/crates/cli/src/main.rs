//! `vaisman`: command-line driver for the lcK/Vaisman toolkit.

mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "vaisman", version, about = "Complex, lcK and Vaisman structures on unimodular Lie algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "VAISMAN_THREADS", global = true)]
    threads: Option<usize>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a Hermitian structure (or check Sasaki data).
    Verify(VerifyArgs),
    /// Apply a modification and check what it preserves.
    Modify(ModifyArgs),
    /// Search for complex structures numerically and match them to the family.
    Search(SearchArgs),
    /// Check the pushed-forward fields of a family chart map.
    Pushforward(PushforwardArgs),
    /// Run the acceptance criteria.
    PaperSuite(SuiteArgs),
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraArgs {
    /// Catalog algebra: gl2r, u2, h:<m>, gh:<m>, ghpsi:<p>,<q>.
    #[arg(long, conflicts_with = "algebra_file")]
    pub algebra: Option<String>,
    /// Algebra in JSON form instead of a catalog name.
    #[arg(long)]
    pub algebra_file: Option<std::path::PathBuf>,
    /// Weight matrix for ghpsi, as `{"weights": [[...]]}`.
    #[arg(long)]
    pub weights: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct StructureArgs {
    /// Family parameter `k,l` of `δ = k + i l`.
    #[arg(long = "J", value_name = "K,L", allow_hyphen_values = true)]
    pub j: Option<String>,
    /// Plane signs for gh algebras, e.g. `1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// Family branch: `v` (J X = Y) or `w` (J X = -Y).
    #[arg(long)]
    pub branch: Option<String>,
    /// Complex structure as a JSON matrix (rows of rationals).
    #[arg(long, conflicts_with = "j")]
    pub j_file: Option<std::path::PathBuf>,
    /// Coefficients of `ψ` in `ω = ψ ∧ t + dψ`: `a,b,c` or `a_1..a_m,b_1..b_m,c_0`.
    #[arg(long, allow_hyphen_values = true)]
    pub lck: Option<String>,
    /// Fundamental form as KForm JSON.
    #[arg(long, conflicts_with = "lck")]
    pub omega: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    /// Expected class: kahler, lck, vaisman or non-vaisman.
    #[arg(long)]
    pub expect: Option<String>,
    /// Check catalog Sasaki data instead: su2, sl2, affine, h:<m>.
    #[arg(long, conflicts_with_all = ["algebra", "algebra_file"])]
    pub sasaki: Option<String>,
}

#[derive(Args, Debug)]
pub struct ModifyArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    /// Modification as `{"phi": {name: matrix}}`.
    #[arg(long)]
    pub phi: std::path::PathBuf,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, default_value_t = 200)]
    pub seeds: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    pub match_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub residual_tol: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub dedup_tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
}

#[derive(Args, Debug)]
pub struct PushforwardArgs {
    /// gl2, sl2, su2 or gh.
    #[arg(long)]
    pub family: String,
    /// `k,l` with `k != 0`.
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub delta: String,
    /// Plane signs (gh only).
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-6)]
    pub step: f64,
    #[arg(long)]
    pub richardson: bool,
    /// Use the sign-free GH map even for mixed signs.
    #[arg(long)]
    pub unsigned_map: bool,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Smaller sample counts.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated criterion ids to run.
    #[arg(long)]
    pub only: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let format = if cli.json { Format::Json } else { cli.format };

    let report = match configure_threads(cli.threads) {
        Err(e) => Report::fail_with_error(echo, e),
        Ok(()) => {
            let start = Instant::now();
            let outcome = match &cli.command {
                Command::Verify(a) => commands::verify(echo.clone(), a),
                Command::Modify(a) => commands::modify(echo.clone(), a),
                Command::Search(a) => commands::search(echo.clone(), a),
                Command::Pushforward(a) => commands::pushforward(echo.clone(), a),
                Command::PaperSuite(a) => commands::paper_suite(echo.clone(), a, cli.timings),
            };
            match outcome {
                Ok(mut r) => {
                    if cli.timings {
                        r.timings.get_or_insert_with(Default::default).insert("total".into(), start.elapsed().as_secs_f64());
                    } else {
                        r.timings = None;
                    }
                    r
                }
                Err(e) => Report::fail_with_error(echo, format!("{e:#}")),
            }
        }
    };

    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Table => print!("{}", report.to_table()),
    }
    ExitCode::from(report.status.exit_code())
}

fn configure_threads(threads: Option<usize>) -> Result<(), String> {
    match threads {
        Some(0) => Err("--threads must be at least 1".into()),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string()),
        None => Ok(()),
    }
}
