//! `fracroot selftest` — built-in check suite: special-function
//! identities, closed-form-vs-quadrature oracle agreement, and the
//! classical-limit regression rows. Prints one line per check and a
//! summary; exits 0 only if every check passes.
//!
//! `--sabotage gamma` is a fault-injection hook: it corrupts the Gamma
//! values used by the identity checks so a healthy suite must fail,
//! proving the checks can actually detect a broken component.

use crate::{usage_error, SelftestArgs};
use fracroot::funcmodel::{
    builtin_model, frac_derivative, frac_derivative_quadrature, DerivKind, FracSpec,
};
use fracroot::solvers::{solve, MethodKind, SolverConfig};
use fracroot::specfun::{gamma, mittag_leffler, MLParams};
use fracroot::ComplexValue;

const REL_TOL: f64 = 1e-10;
const ORACLE_ABS_TOL: f64 = 1e-6;

#[derive(Clone, Copy, PartialEq)]
enum Sabotage {
    None,
    Gamma,
}

/// Gamma as seen by the identity checks; the sabotage hook injects an
/// absolute offset large enough that every identity must notice.
fn st_gamma(z: ComplexValue, sabotage: Sabotage) -> Result<ComplexValue, String> {
    let g = gamma(z).map_err(|e| e.to_string())?;
    Ok(match sabotage {
        Sabotage::None => g,
        Sabotage::Gamma => g + ComplexValue::new(1e-6, 0.0),
    })
}

struct Outcome {
    name: String,
    result: Result<(), String>,
}

fn rel_check(name: String, got: ComplexValue, want: ComplexValue, tol: f64) -> Outcome {
    let denom = want.norm().max(1e-300);
    let rel = (got - want).norm() / denom;
    let result = if rel <= tol {
        Ok(())
    } else {
        Err(format!("relative error {rel:.3e} exceeds {tol:.0e} (got {got}, want {want})"))
    };
    Outcome { name, result }
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn gamma_checks(sabotage: Sabotage, out: &mut Vec<Outcome>) {
    let recurrence_points = [
        c(0.5, 0.0),
        c(1.7, 2.3),
        c(-2.3, 1.1),
        c(3.25, -4.0),
        c(0.1, 0.1),
        c(-0.7, -0.2),
        c(6.0, 1.0),
        c(0.9, -3.0),
    ];
    for z in recurrence_points {
        let name = format!("gamma recurrence at z={z}");
        match (st_gamma(z + 1.0, sabotage), st_gamma(z, sabotage)) {
            (Ok(lhs), Ok(rhs)) => out.push(rel_check(name, lhs, z * rhs, REL_TOL)),
            (Err(e), _) | (_, Err(e)) => out.push(Outcome { name, result: Err(e) }),
        }
    }

    let reflection_points =
        [c(0.3, 0.4), c(0.5, 0.0), c(-1.2, 0.8), c(2.6, -1.4), c(0.25, -2.0), c(1.5, 3.0)];
    for z in reflection_points {
        let name = format!("gamma reflection at z={z}");
        let want = ComplexValue::new(std::f64::consts::PI, 0.0) / (z * std::f64::consts::PI).sin();
        match (st_gamma(z, sabotage), st_gamma(ComplexValue::new(1.0, 0.0) - z, sabotage)) {
            (Ok(a), Ok(b)) => out.push(rel_check(name, a * b, want, REL_TOL)),
            (Err(e), _) | (_, Err(e)) => out.push(Outcome { name, result: Err(e) }),
        }
    }

    for z in [c(1.7, 2.3), c(-0.4, 1.9), c(4.0, -0.3)] {
        let name = format!("gamma conjugate symmetry at z={z}");
        match (st_gamma(z.conj(), sabotage), st_gamma(z, sabotage)) {
            (Ok(a), Ok(b)) => out.push(rel_check(name, a, b.conj(), REL_TOL)),
            (Err(e), _) | (_, Err(e)) => out.push(Outcome { name, result: Err(e) }),
        }
    }

    let specials = [
        (c(1.0, 0.0), c(1.0, 0.0), "gamma(1) = 1"),
        (c(5.0, 0.0), c(24.0, 0.0), "gamma(5) = 24"),
        (c(0.5, 0.0), c(std::f64::consts::PI.sqrt(), 0.0), "gamma(1/2) = sqrt(pi)"),
    ];
    for (z, want, label) in specials {
        let name = label.to_string();
        match st_gamma(z, sabotage) {
            Ok(g) => out.push(rel_check(name, g, want, REL_TOL)),
            Err(e) => out.push(Outcome { name, result: Err(e) }),
        }
    }
}

fn mittag_leffler_checks(out: &mut Vec<Outcome>) {
    let ml = |a: f64, b: f64, z: ComplexValue| {
        mittag_leffler(MLParams::new(a, b).expect("valid parameters"), z).map_err(|e| e.to_string())
    };

    // E_{1,1}(z) = exp(z), including a cancelling argument and one in the
    // asymptotic regime.
    for z in [c(1.3, 0.0), c(-4.0, 2.0), c(-25.0, 0.0), c(0.0, 40.0)] {
        let name = format!("mittag_leffler exp identity at z={z}");
        match ml(1.0, 1.0, z) {
            Ok(v) => out.push(rel_check(name, v, z.exp(), REL_TOL)),
            Err(e) => out.push(Outcome { name, result: Err(e) }),
        }
    }

    // E_{2,1}(z^2) = cosh(z).
    for z in [c(2.0, 0.0), c(0.0, 5.0), c(3.0, -3.0)] {
        let name = format!("mittag_leffler cosh identity at z={z}");
        match ml(2.0, 1.0, z * z) {
            Ok(v) => out.push(rel_check(name, v, z.cosh(), REL_TOL)),
            Err(e) => out.push(Outcome { name, result: Err(e) }),
        }
    }

    // E_{1,2}(z) = (exp(z) - 1)/z.
    for z in [c(0.9, -1.2), c(-7.5, 0.4)] {
        let name = format!("mittag_leffler shift identity at z={z}");
        match ml(1.0, 2.0, z) {
            Ok(v) => out.push(rel_check(name, v, (z.exp() - 1.0) / z, REL_TOL)),
            Err(e) => out.push(Outcome { name, result: Err(e) }),
        }
    }
}

fn oracle_checks(out: &mut Vec<Outcome>) {
    let x = 0.8;
    for fname in ["f1", "f2", "f3", "f4"] {
        let model = builtin_model(fname).expect("built-in exists");
        for kind in [DerivKind::Caputo, DerivKind::RiemannLiouville] {
            let name = format!("{kind:?} derivative closed form vs quadrature on {fname} at x={x}");
            let spec = FracSpec::new(0.75, 0.0, kind).expect("valid spec");
            let closed = frac_derivative(&model, &spec, c(x, 0.0));
            let quad = frac_derivative_quadrature(&model, &spec, x);
            let result = match (closed, quad) {
                (Ok(cf), Ok(q)) => {
                    let err = (cf - q).norm();
                    if err <= ORACLE_ABS_TOL {
                        Ok(())
                    } else {
                        Err(format!("oracle disagreement {err:.3e} exceeds {ORACLE_ABS_TOL:.0e}"))
                    }
                }
                (Err(e), _) => Err(format!("closed form failed: {e}")),
                (_, Err(e)) => Err(format!("quadrature failed: {e}")),
            };
            out.push(Outcome { name, result });
        }
    }
}

fn regression_checks(out: &mut Vec<Outcome>) {
    // Classical-limit rows: (function, method, x0, expected iterations).
    let rows = [
        ("f1", MethodKind::Cfn1, c(-1.5, 0.0), 6),
        ("f1", MethodKind::Cfn2, c(-1.5, 0.0), 6),
        ("f1", MethodKind::Cft, c(-1.5, 0.0), 5),
        ("f2", MethodKind::Cfn1, c(-4.5, 0.0), 4),
        ("f2", MethodKind::Rlfn2, c(-4.5, 0.0), 4),
        ("f2", MethodKind::Cft, c(-4.5, 0.0), 3),
        ("f3", MethodKind::Cfn1, c(0.5, 0.0), 4),
    ];
    for (fname, method, x0, want_iters) in rows {
        let name = format!("classical limit: {method} on {fname} from x0={x0} takes {want_iters}");
        let model = builtin_model(fname).expect("built-in exists");
        let config = SolverConfig::new(1.0, 0.0).expect("valid config");
        let result = match solve(method, &model, x0, &config) {
            Ok(trace) if !trace.status.converged() => {
                Err(format!("did not converge: {}", trace.status))
            }
            Ok(trace) if trace.iterations != want_iters => {
                Err(format!("took {} iterations", trace.iterations))
            }
            Ok(_) => Ok(()),
            Err(e) => Err(e.to_string()),
        };
        out.push(Outcome { name, result });
    }
}

pub fn run(args: &SelftestArgs) -> u8 {
    let sabotage = match args.sabotage.as_deref() {
        None => Sabotage::None,
        Some("gamma") => Sabotage::Gamma,
        Some(other) => {
            return usage_error(&format!("unknown sabotage target {other:?}; accepted: gamma"))
        }
    };

    let mut outcomes = Vec::new();
    gamma_checks(sabotage, &mut outcomes);
    mittag_leffler_checks(&mut outcomes);
    oracle_checks(&mut outcomes);
    regression_checks(&mut outcomes);

    let mut passed = 0usize;
    for outcome in &outcomes {
        match &outcome.result {
            Ok(()) => {
                passed += 1;
                println!("ok   {}", outcome.name);
            }
            Err(detail) => println!("FAIL {}: {detail}", outcome.name),
        }
    }
    println!("self-test: {passed}/{} checks passed", outcomes.len());
    if passed == outcomes.len() {
        0
    } else {
        5
    }
}
