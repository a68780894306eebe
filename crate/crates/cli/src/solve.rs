//! `fracroot solve` — run one iteration to termination and print the
//! result row (approximation, last step size, final residual, iteration
//! count, status).

use crate::format::{complex5, csv17, parse_complex, sig5};
use crate::manifest::{ConfigSnapshot, RunManifest, SolveSnapshot};
use crate::{usage_error, SolveArgs};
use fracroot::funcmodel::{builtin_model, recenter_powers, FunctionModel};
use fracroot::solvers::{solve, IterationTrace, MethodKind, SolverConfig, TerminationStatus};
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

/// Parse a method name with the library's spelling rules.
pub(crate) fn parse_method(s: &str) -> Result<MethodKind, String> {
    MethodKind::from_str(s).map_err(|e| e.to_string())
}

/// Resolve `--function` (built-in name or JSON file path), then apply
/// `--base` by rebasing the model when it differs from the model's own
/// reference point.
pub(crate) fn load_model(spec: &str, base: Option<f64>) -> Result<FunctionModel, String> {
    let model = match builtin_model(spec) {
        Some(m) => m,
        None => {
            let body = fs::read_to_string(spec).map_err(|e| {
                format!("{spec:?} is not a built-in function (f1..f4) and cannot be read: {e}")
            })?;
            FunctionModel::from_json_str(&body).map_err(|e| format!("{spec}: {e}"))?
        }
    };
    match base {
        Some(b) if b != model.reference_point() => {
            recenter_powers(&model, b).map_err(|e| format!("--base {b}: {e}"))
        }
        _ => Ok(model),
    }
}

/// Build a solver configuration from the shared tolerance/cap flags.
pub(crate) fn build_config(
    alpha: f64,
    base: f64,
    max_iter: Option<usize>,
    tol_step: Option<f64>,
    tol_res: Option<f64>,
) -> Result<SolverConfig, String> {
    let mut config = SolverConfig::new(alpha, base).map_err(|e| e.to_string())?;
    if let Some(m) = max_iter {
        config = config.with_max_iterations(m).map_err(|e| e.to_string())?;
    }
    if let Some(t) = tol_step {
        config = config.with_step_tol(t).map_err(|e| e.to_string())?;
    }
    if let Some(t) = tol_res {
        config = config.with_residual_tol(t).map_err(|e| e.to_string())?;
    }
    Ok(config)
}

/// `|x_{k+1} - x_k|` of the final step, or 0 when no step was taken.
fn last_step_size(trace: &IterationTrace) -> f64 {
    let n = trace.iterates.len();
    if n < 2 {
        0.0
    } else {
        (trace.iterates[n - 1] - trace.iterates[n - 2]).norm()
    }
}

fn write_trace_csv(path: &str, trace: &IterationTrace) -> Result<(), String> {
    let mut body = String::from("k,x_re,x_im,residual\n");
    for (k, (x, r)) in trace.iterates.iter().zip(&trace.residuals).enumerate() {
        body.push_str(&format!("{k},{},{},{}\n", csv17(x.re), csv17(x.im), csv17(*r)));
    }
    fs::write(path, body).map_err(|e| format!("cannot write {path}: {e}"))
}

pub fn run(args: &SolveArgs) -> u8 {
    let started = Instant::now();
    let method = match parse_method(&args.method) {
        Ok(m) => m,
        Err(e) => return usage_error(&e),
    };
    let model = match load_model(&args.function, args.base) {
        Ok(m) => m,
        Err(e) => return usage_error(&e),
    };
    let x0 = match parse_complex(&args.x0) {
        Ok(v) => v,
        Err(e) => return usage_error(&format!("--x0: {e}")),
    };
    let config = match build_config(
        args.alpha,
        model.reference_point(),
        args.max_iter,
        args.tol_step,
        args.tol_res,
    ) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };

    let trace = match solve(method, &model, x0, &config) {
        Ok(t) => t,
        Err(e) => return usage_error(&e.to_string()),
    };

    println!(
        "{:<18} {:<14} {:<14} {:<6} status",
        "x_approx", "|x_k+1 - x_k|", "|f(x_k+1)|", "iter"
    );
    println!(
        "{:<18} {:<14} {:<14} {:<6} {}",
        complex5(trace.final_iterate()),
        sig5(last_step_size(&trace)),
        sig5(trace.final_residual()),
        trace.iterations,
        trace.status
    );

    if let Some(trace_path) = &args.trace {
        if let Err(e) = write_trace_csv(trace_path, &trace) {
            return usage_error(&e);
        }
        let function: serde_json::Value =
            serde_json::from_str(&model.to_json_string()).expect("model JSON always parses");
        let manifest = RunManifest {
            command: std::env::args().collect(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: started.elapsed().as_secs_f64(),
            outputs: vec![trace_path.clone()],
            config: ConfigSnapshot::Solve(SolveSnapshot {
                method: method.to_string(),
                function,
                alpha: config.alpha(),
                x0: [x0.re, x0.im],
                base: config.base(),
                max_iterations: config.max_iterations(),
                step_tol: config.step_tol(),
                residual_tol: config.residual_tol(),
            }),
        };
        let manifest_path = Path::new(trace_path).with_extension("manifest.json");
        if let Err(e) = manifest.write(&manifest_path) {
            return usage_error(&e);
        }
    }

    match trace.status {
        TerminationStatus::ConvergedResidual | TerminationStatus::ConvergedStep => 0,
        TerminationStatus::MaxIterations => 2,
        TerminationStatus::NumericalFailure => 3,
    }
}
