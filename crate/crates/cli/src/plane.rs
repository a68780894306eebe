//! `fracroot plane` — rasterize a convergence plane and write
//! `<prefix>.ppm`, `<prefix>.csv` and `<prefix>.manifest.json`.
//!
//! The percentage of convergent cells is printed to stdout with two
//! decimals. Output bytes are independent of the worker count, and
//! `--from-manifest` reproduces a previous run's PPM/CSV exactly.

use crate::manifest::{ConfigSnapshot, PlaneSnapshot, RunManifest};
use crate::solve::{load_model, parse_method};
use crate::{usage_error, PlaneArgs};
use fracroot::funcmodel::{builtin_roots, FunctionModel};
use fracroot::planes::{
    default_palette, generate_plane, generate_plane_with_workers, render_ppm, write_csv, Axis,
    PlaneConfig,
};
use fracroot::solvers::{MethodKind, SolverConfig};
use fracroot::ComplexValue;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

/// Everything needed to run one plane, resolved either from flags or from
/// a previous run's manifest.
struct ResolvedPlane {
    method: MethodKind,
    model: FunctionModel,
    axis: Axis,
    segment: (f64, f64),
    alpha_range: (f64, f64),
    resolution: (usize, usize),
    roots: Vec<ComplexValue>,
    match_tol: Option<f64>,
    solver: SolverConfig,
    out_prefix: String,
}

fn resolve_from_flags(args: &PlaneArgs) -> Result<ResolvedPlane, String> {
    let function_spec = args.function.as_deref().expect("clap enforces presence");
    let method = parse_method(args.method.as_deref().expect("clap enforces presence"))?;
    let model = load_model(function_spec, args.base)?;
    let axis = Axis::from_str(args.axis.as_deref().expect("clap enforces presence"))
        .map_err(|e| e.to_string())?;
    let roots = resolve_roots(&args.roots, function_spec)?;
    let solver = crate::solve::build_config(
        args.alpha_hi,
        model.reference_point(),
        args.max_iter,
        args.tol_step,
        args.tol_res,
    )?;
    Ok(ResolvedPlane {
        method,
        model,
        axis,
        segment: (
            args.lo.expect("clap enforces presence"),
            args.hi.expect("clap enforces presence"),
        ),
        alpha_range: (args.alpha_lo, args.alpha_hi),
        resolution: (args.nx, args.nalpha),
        roots,
        match_tol: args.match_tol,
        solver,
        out_prefix: args.out.clone().expect("clap enforces presence"),
    })
}

fn resolve_from_manifest(path: &str, out_override: Option<&str>) -> Result<ResolvedPlane, String> {
    let manifest = RunManifest::read(Path::new(path))?;
    let snap = match manifest.config {
        ConfigSnapshot::Plane(snap) => snap,
        ConfigSnapshot::Solve(_) => {
            return Err(format!("{path} records a solve run, not a plane run"));
        }
    };
    let method = parse_method(&snap.method)?;
    let model = FunctionModel::from_json_str(&snap.function.to_string())
        .map_err(|e| format!("manifest function model: {e}"))?;
    let axis = Axis::from_str(&snap.axis).map_err(|e| e.to_string())?;
    let solver = crate::solve::build_config(
        snap.alpha_hi,
        snap.base,
        Some(snap.max_iterations),
        Some(snap.step_tol),
        Some(snap.residual_tol),
    )?;
    Ok(ResolvedPlane {
        method,
        model,
        axis,
        segment: (snap.lo, snap.hi),
        alpha_range: (snap.alpha_lo, snap.alpha_hi),
        resolution: (snap.nx, snap.nalpha),
        roots: snap.roots.iter().map(|[re, im]| ComplexValue::new(*re, *im)).collect(),
        match_tol: Some(snap.match_tol),
        solver,
        out_prefix: out_override.unwrap_or(&snap.out_prefix).to_string(),
    })
}

/// `builtin` resolves through the function name; anything else is a path
/// to a JSON file holding `[[re, im], ...]`.
fn resolve_roots(spec: &str, function_spec: &str) -> Result<Vec<ComplexValue>, String> {
    if spec == "builtin" {
        return builtin_roots(function_spec).ok_or_else(|| {
            format!(
                "no built-in roots for {function_spec:?}; pass --roots <file.json> \
                 with the root list"
            )
        });
    }
    let body = fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&body)
        .map_err(|e| format!("{spec} must hold a JSON array of [re, im] pairs: {e}"))?;
    Ok(pairs.iter().map(|[re, im]| ComplexValue::new(*re, *im)).collect())
}

/// `--workers`, else FRACROOT_WORKERS, else automatic.
fn resolve_workers(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("FRACROOT_WORKERS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("FRACROOT_WORKERS must be a positive integer, got {s:?}")),
        Err(_) => Ok(None),
    }
}

pub fn run(args: &PlaneArgs) -> u8 {
    let started = Instant::now();
    let resolved = match &args.from_manifest {
        Some(path) => resolve_from_manifest(path, args.out.as_deref()),
        None => resolve_from_flags(args),
    };
    let resolved = match resolved {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let workers = match resolve_workers(args.workers) {
        Ok(w) => w,
        Err(e) => return usage_error(&e),
    };

    let config = PlaneConfig::new(
        resolved.method,
        resolved.model.clone(),
        resolved.axis,
        resolved.segment,
        resolved.alpha_range,
        resolved.resolution,
        resolved.roots.clone(),
        resolved.solver,
    );
    let mut config = match config {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    if let Some(tol) = resolved.match_tol {
        config = match config.with_match_tol(tol) {
            Ok(c) => c,
            Err(e) => return usage_error(&e.to_string()),
        };
    }

    let result = match workers {
        Some(w) => generate_plane_with_workers(&config, w),
        None => generate_plane(&config),
    };

    let ppm = match render_ppm(&result, &default_palette()) {
        Ok(bytes) => bytes,
        Err(e) => return usage_error(&e.to_string()),
    };
    let csv = write_csv(&result);

    let prefix = &resolved.out_prefix;
    let ppm_path = format!("{prefix}.ppm");
    let csv_path = format!("{prefix}.csv");
    if let Err(e) = fs::write(&ppm_path, ppm) {
        return usage_error(&format!("cannot write {ppm_path}: {e}"));
    }
    if let Err(e) = fs::write(&csv_path, csv) {
        return usage_error(&format!("cannot write {csv_path}: {e}"));
    }

    let function: serde_json::Value =
        serde_json::from_str(&resolved.model.to_json_string()).expect("model JSON always parses");
    let manifest = RunManifest {
        command: std::env::args().collect(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        duration_seconds: started.elapsed().as_secs_f64(),
        outputs: vec![ppm_path, csv_path],
        config: ConfigSnapshot::Plane(PlaneSnapshot {
            method: resolved.method.to_string(),
            function,
            axis: resolved.axis.to_string(),
            lo: resolved.segment.0,
            hi: resolved.segment.1,
            alpha_lo: resolved.alpha_range.0,
            alpha_hi: resolved.alpha_range.1,
            nx: resolved.resolution.0,
            nalpha: resolved.resolution.1,
            roots: resolved.roots.iter().map(|r| [r.re, r.im]).collect(),
            match_tol: config.match_tol(),
            base: config.solver().base(),
            max_iterations: config.solver().max_iterations(),
            step_tol: config.solver().step_tol(),
            residual_tol: config.solver().residual_tol(),
            out_prefix: prefix.clone(),
        }),
    };
    let manifest_path = format!("{prefix}.manifest.json");
    if let Err(e) = manifest.write(Path::new(&manifest_path)) {
        return usage_error(&e);
    }

    println!("{:.2}", result.percentage);
    0
}
