//! `fracroot` — command-line frontend for fractional-order root finding.
//!
//! Subcommands:
//!
//! * `solve` — run one iteration to termination and print a result row;
//! * `plane` — rasterize a convergence plane to PPM + CSV + manifest;
//! * `order` — estimate the computational order of convergence of a run;
//! * `selftest` — run the built-in identity and regression check suite.
//!
//! Exit codes: 0 success / converged; 1 usage or configuration error;
//! 2 iteration cap reached; 3 numerical breakdown; 4 not enough data for
//! an order estimate; 5 self-test failure.

mod format;
mod manifest;
mod order;
mod plane;
mod selftest;
mod solve;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fracroot",
    version,
    about = "Fractional-derivative Newton and Traub root finding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one root-finding iteration and print its result row.
    Solve(SolveArgs),
    /// Rasterize a convergence plane (starting point vs fractional order).
    Plane(PlaneArgs),
    /// Estimate the computational order of convergence of a run.
    Order(OrderArgs),
    /// Run the built-in identity and regression checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Iteration method: cfn1, cfn2, cft, rlfn1, rlfn2 or rlft.
    #[arg(long)]
    method: String,
    /// Built-in function name (f1..f4) or path to a model JSON file.
    #[arg(long)]
    function: String,
    /// Fractional order in (0, 1].
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Starting point, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
    /// Lower terminal of the fractional derivative (default: the model's
    /// own reference point; integer-exponent power models are rebased).
    #[arg(long, allow_hyphen_values = true)]
    base: Option<f64>,
    /// Step-size tolerance |x_{k+1} - x_k| (default 1e-8).
    #[arg(long)]
    tol_step: Option<f64>,
    /// Residual tolerance |f(x)| (default 1e-8).
    #[arg(long)]
    tol_res: Option<f64>,
    /// Iteration cap (default 500).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the full iterate trace to this CSV file.
    #[arg(long)]
    trace: Option<String>,
}

#[derive(Args)]
struct PlaneArgs {
    /// Iteration method: cfn1, cfn2, cft, rlfn1, rlfn2 or rlft.
    #[arg(long, required_unless_present = "from_manifest")]
    method: Option<String>,
    /// Built-in function name (f1..f4) or path to a model JSON file.
    #[arg(long, required_unless_present = "from_manifest")]
    function: Option<String>,
    /// Axis the starting points vary along: real or imag.
    #[arg(long, required_unless_present = "from_manifest")]
    axis: Option<String>,
    /// Lower end of the starting-point segment.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "from_manifest")]
    lo: Option<f64>,
    /// Upper end of the starting-point segment.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "from_manifest")]
    hi: Option<f64>,
    /// Lower end of the fractional-order range.
    #[arg(long, default_value_t = 0.5)]
    alpha_lo: f64,
    /// Upper end of the fractional-order range.
    #[arg(long, default_value_t = 1.0)]
    alpha_hi: f64,
    /// Grid columns (starting points).
    #[arg(long, default_value_t = 400)]
    nx: usize,
    /// Grid rows (fractional orders).
    #[arg(long, default_value_t = 200)]
    nalpha: usize,
    /// Root list: `builtin` for the built-in functions' roots, or a path
    /// to a JSON file holding `[[re, im], ...]`.
    #[arg(long, default_value = "builtin")]
    roots: String,
    /// Root-matching tolerance.
    #[arg(long)]
    match_tol: Option<f64>,
    /// Output prefix; writes `<prefix>.ppm`, `<prefix>.csv`,
    /// `<prefix>.manifest.json`.
    #[arg(long, required_unless_present = "from_manifest")]
    out: Option<String>,
    /// Worker threads (default: FRACROOT_WORKERS env var, else automatic).
    /// The output is byte-identical for any worker count.
    #[arg(long)]
    workers: Option<usize>,
    /// Lower terminal of the fractional derivative.
    #[arg(long, allow_hyphen_values = true)]
    base: Option<f64>,
    /// Step-size tolerance (default 1e-8).
    #[arg(long)]
    tol_step: Option<f64>,
    /// Residual tolerance (default 1e-8).
    #[arg(long)]
    tol_res: Option<f64>,
    /// Iteration cap per cell (default 500).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Re-run the exact configuration recorded in a previous run's
    /// manifest (other configuration flags are rejected; `--out` and
    /// `--workers` stay available).
    #[arg(long, conflicts_with_all = ["method", "function", "axis", "lo", "hi",
                                      "alpha_lo", "alpha_hi", "nx", "nalpha", "roots",
                                      "match_tol", "base", "tol_step", "tol_res", "max_iter"])]
    from_manifest: Option<String>,
}

#[derive(Args)]
struct OrderArgs {
    /// Iteration method: cfn1, cfn2, cft, rlfn1, rlfn2 or rlft.
    #[arg(long)]
    method: String,
    /// Fractional order in (0, 1].
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Built-in function name (f1..f4) or path to a model JSON file.
    #[arg(long, required_unless_present = "replay")]
    function: Option<String>,
    /// Starting point, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "replay")]
    x0: Option<String>,
    /// Lower terminal of the fractional derivative.
    #[arg(long, allow_hyphen_values = true)]
    base: Option<f64>,
    /// Iteration cap (default 500).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Known root, `re` or `re,im`; enables the error-constant ratio and
    /// sharpens the error sequence (otherwise the final iterate stands in).
    #[arg(long, allow_hyphen_values = true)]
    root: Option<String>,
    /// Estimate from a previously recorded trace CSV (`k,x_re,x_im,...`)
    /// instead of running the iteration; requires --root.
    #[arg(long)]
    replay: Option<String>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Fault-injection hook: deliberately corrupt a component and verify
    /// that the suite notices. Accepted value: `gamma`.
    #[arg(long)]
    sabotage: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // a usage error (exit 1, message on stderr).
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Plane(args) => plane::run(&args),
        Command::Order(args) => order::run(&args),
        Command::Selftest(args) => selftest::run(&args),
    };
    ExitCode::from(code)
}

/// Print a usage/configuration error and return the usage exit code.
fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    1
}
