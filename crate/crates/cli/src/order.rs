//! `fracroot order` — run an iteration (or replay a recorded trace) and
//! report the approximate computational order of convergence next to the
//! method's theoretical order, plus the empirical/theoretical
//! error-constant ratio when a root is supplied.

use crate::format::parse_complex;
use crate::solve::{build_config, load_model, parse_method};
use crate::{usage_error, OrderArgs};
use fracroot::analysis::{acoc, empirical_error_constant, error_constants};
use fracroot::funcmodel::FunctionModel;
use fracroot::solvers::{solve, IterationTrace, MethodKind, TerminationStatus};
use fracroot::{ComplexValue, Error};
use std::fs;

/// Theoretical order of the method at fractional order `alpha`, with the
/// label printed next to it. The damped Newton variants have no proven
/// order of their own here; 2*alpha is the cited value.
fn theoretical_order(method: MethodKind, alpha: f64) -> (f64, &'static str) {
    match method {
        MethodKind::Cfn1 | MethodKind::Rlfn1 => (2.0 * alpha, "2*alpha, cited"),
        MethodKind::Cfn2 | MethodKind::Rlfn2 => (alpha + 1.0, "alpha + 1"),
        MethodKind::Cft | MethodKind::Rlft => (2.0 * alpha + 1.0, "2*alpha + 1"),
    }
}

/// Read a trace CSV (as written by `solve --trace`: `k,x_re,x_im[,residual]`)
/// back into an iterate sequence.
fn read_trace_csv(path: &str) -> Result<(Vec<ComplexValue>, Vec<f64>), String> {
    let body = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    for (lineno, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if lineno == 0 && fields[0].parse::<f64>().is_err() {
            continue; // header row
        }
        if fields.len() < 3 {
            return Err(format!("{path}:{}: expected k,x_re,x_im[,residual]", lineno + 1));
        }
        let re: f64 = fields[1]
            .parse()
            .map_err(|_| format!("{path}:{}: invalid x_re {:?}", lineno + 1, fields[1]))?;
        let im: f64 = fields[2]
            .parse()
            .map_err(|_| format!("{path}:{}: invalid x_im {:?}", lineno + 1, fields[2]))?;
        let residual: f64 = match fields.get(3) {
            Some(f) => {
                f.parse().map_err(|_| format!("{path}:{}: invalid residual {:?}", lineno + 1, f))?
            }
            None => 0.0,
        };
        iterates.push(ComplexValue::new(re, im));
        residuals.push(residual);
    }
    if iterates.is_empty() {
        return Err(format!("{path}: no data rows"));
    }
    Ok((iterates, residuals))
}

/// The live-run inputs the ratio line needs; absent in replay mode.
struct LiveRun {
    model: FunctionModel,
}

pub fn run(args: &OrderArgs) -> u8 {
    let method = match parse_method(&args.method) {
        Ok(m) => m,
        Err(e) => return usage_error(&e),
    };
    if !args.alpha.is_finite() || args.alpha <= 0.0 || args.alpha > 1.0 {
        return usage_error(&format!("--alpha must lie in (0, 1], got {}", args.alpha));
    }
    let root_flag = match &args.root {
        Some(s) => match parse_complex(s) {
            Ok(v) => Some(v),
            Err(e) => return usage_error(&format!("--root: {e}")),
        },
        None => None,
    };

    let (trace, live) = if let Some(replay_path) = &args.replay {
        if root_flag.is_none() {
            return usage_error("--replay requires --root (the trace alone fixes no root)");
        }
        let (iterates, residuals) = match read_trace_csv(replay_path) {
            Ok(t) => t,
            Err(e) => return usage_error(&e),
        };
        let iterations = iterates.len() - 1;
        let trace = IterationTrace {
            method,
            alpha: args.alpha,
            iterates,
            residuals,
            status: TerminationStatus::ConvergedStep,
            iterations,
        };
        (trace, None)
    } else {
        let model = match load_model(
            args.function.as_deref().expect("clap enforces presence"),
            args.base,
        ) {
            Ok(m) => m,
            Err(e) => return usage_error(&e),
        };
        let x0 = match parse_complex(args.x0.as_deref().expect("clap enforces presence")) {
            Ok(v) => v,
            Err(e) => return usage_error(&format!("--x0: {e}")),
        };
        let config =
            match build_config(args.alpha, model.reference_point(), args.max_iter, None, None) {
                Ok(c) => c,
                Err(e) => return usage_error(&e),
            };
        let trace = match solve(method, &model, x0, &config) {
            Ok(t) => t,
            Err(e) => return usage_error(&e.to_string()),
        };
        (trace, Some(LiveRun { model }))
    };

    // Without a known root, the final iterate stands in; the estimator's
    // noise floor keeps the stand-in from polluting the usable triples.
    let root = root_flag.unwrap_or_else(|| trace.final_iterate());

    let estimate = match acoc(&trace, root) {
        Ok(a) => a,
        Err(Error::InsufficientData { reason }) => {
            eprintln!("error: not enough usable iterates for an order estimate: {reason}");
            return 4;
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    let (order, label) = theoretical_order(method, args.alpha);
    println!("ACOC: {estimate:.2}");
    println!("theoretical order: {order:.2} ({label})");

    // Error-constant ratio: needs the model (live run), a supplied root,
    // and a method with a published constant (the exponent-corrected
    // Newton and Traub families).
    if let (Some(live), Some(root)) = (live, root_flag) {
        if let Some(theory) = constant_magnitude(&live.model, method, args.alpha, root) {
            match empirical_error_constant(&trace, root, order) {
                Ok(empirical) => {
                    println!("constant ratio (empirical/theoretical): {:.2}", empirical / theory);
                }
                Err(e) => eprintln!("note: no error-constant estimate: {e}"),
            }
        }
    }
    0
}

/// |newton_constant| or |traub_constant| where the theory provides one.
fn constant_magnitude(
    model: &FunctionModel,
    method: MethodKind,
    alpha: f64,
    root: ComplexValue,
) -> Option<f64> {
    let wants_newton = matches!(method, MethodKind::Cfn2 | MethodKind::Rlfn2);
    let wants_traub = matches!(method, MethodKind::Cft | MethodKind::Rlft);
    if !wants_newton && !wants_traub {
        eprintln!("note: no published error constant for the damped Newton family");
        return None;
    }
    match error_constants(model, root, alpha, method.deriv_kind()) {
        Ok(k) => {
            Some(if wants_newton { k.newton_constant.norm() } else { k.traub_constant.norm() })
        }
        Err(e) => {
            eprintln!("note: error constants unavailable at this root: {e}");
            None
        }
    }
}
