//! Fractional Newton and Traub iterations.
//!
//! Six method variants are provided, each in a Caputo and a
//! Riemann-Liouville flavor (`alpha` is the fractional order, `G` is the
//! Gamma function, `D^alpha` the fractional derivative with lower terminal
//! at the configured base point):
//!
//! * damped fractional Newton (`cfn1`, `rlfn1`):
//!   `x1 = x0 - G(alpha+1) f(x0) / D^alpha f(x0)`;
//! * exponent-corrected fractional Newton (`cfn2`, `rlfn2`):
//!   `x1 = x0 - [G(alpha+1) f(x0) / D^alpha f(x0)]^{1/alpha}`;
//! * fractional Traub (`cft`, `rlft`): one corrected Newton stage to `y0`,
//!   then `x1 = y0 - [G(alpha+1) f(y0) / D^alpha f(x0)]^{1/alpha}` with the
//!   derivative frozen at `x0`.
//!
//! At `alpha = 1` all of them collapse to the classical Newton and Traub
//! methods bit-for-bit: the fractional derivative routes to the classical one
//! and [`principal_power`] returns its argument unchanged for exponent 1.
//! Powers take the principal branch (`Arg` in `(-pi, pi]`), with a `-0.0`
//! imaginary part normalized to `+0.0` so real iterates behave consistently
//! on the branch cut.
//!
//! [`solve`] runs the iteration to a fixed stopping protocol and returns the
//! full [`IterationTrace`]. Numerical breakdown during a step (zero
//! derivative, Mittag-Leffler range exhaustion, non-finite arithmetic) is
//! not an error of `solve` itself: the trace ends with a NaN iterate and
//! [`TerminationStatus::NumericalFailure`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{DerivKind, FracSpec, FunctionModel, PreparedEval, PreparedFrac};
use crate::specfun::gamma_real;
use crate::ComplexValue;

/// The six iteration variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    /// Caputo damped fractional Newton.
    Cfn1,
    /// Caputo exponent-corrected fractional Newton.
    Cfn2,
    /// Caputo fractional Traub.
    Cft,
    /// Riemann-Liouville damped fractional Newton.
    Rlfn1,
    /// Riemann-Liouville exponent-corrected fractional Newton.
    Rlfn2,
    /// Riemann-Liouville fractional Traub.
    Rlft,
}

/// Update rule families shared by the Caputo and Riemann-Liouville variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Newton1,
    Newton2,
    Traub,
}

impl MethodKind {
    /// All methods, in canonical presentation order.
    pub fn all() -> [MethodKind; 6] {
        [
            MethodKind::Cfn1,
            MethodKind::Cfn2,
            MethodKind::Cft,
            MethodKind::Rlfn1,
            MethodKind::Rlfn2,
            MethodKind::Rlft,
        ]
    }

    /// Which fractional derivative the method uses.
    pub fn deriv_kind(&self) -> DerivKind {
        match self {
            MethodKind::Cfn1 | MethodKind::Cfn2 | MethodKind::Cft => DerivKind::Caputo,
            MethodKind::Rlfn1 | MethodKind::Rlfn2 | MethodKind::Rlft => DerivKind::RiemannLiouville,
        }
    }

    /// The local convergence order the theory assigns near a simple root:
    /// `2 alpha` for the damped Newton variants, `alpha + 1` for the
    /// exponent-corrected ones, and `2 alpha + 1` for Traub.
    pub fn theoretical_order(&self, alpha: f64) -> f64 {
        match self.family() {
            Family::Newton1 => 2.0 * alpha,
            Family::Newton2 => alpha + 1.0,
            Family::Traub => 2.0 * alpha + 1.0,
        }
    }

    fn family(&self) -> Family {
        match self {
            MethodKind::Cfn1 | MethodKind::Rlfn1 => Family::Newton1,
            MethodKind::Cfn2 | MethodKind::Rlfn2 => Family::Newton2,
            MethodKind::Cft | MethodKind::Rlft => Family::Traub,
        }
    }

    fn from_parts(family: Family, kind: DerivKind) -> MethodKind {
        match (family, kind) {
            (Family::Newton1, DerivKind::Caputo) => MethodKind::Cfn1,
            (Family::Newton2, DerivKind::Caputo) => MethodKind::Cfn2,
            (Family::Traub, DerivKind::Caputo) => MethodKind::Cft,
            (Family::Newton1, DerivKind::RiemannLiouville) => MethodKind::Rlfn1,
            (Family::Newton2, DerivKind::RiemannLiouville) => MethodKind::Rlfn2,
            (Family::Traub, DerivKind::RiemannLiouville) => MethodKind::Rlft,
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MethodKind::Cfn1 => "cfn1",
            MethodKind::Cfn2 => "cfn2",
            MethodKind::Cft => "cft",
            MethodKind::Rlfn1 => "rlfn1",
            MethodKind::Rlfn2 => "rlfn2",
            MethodKind::Rlft => "rlft",
        };
        f.write_str(s)
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cfn1" => Ok(MethodKind::Cfn1),
            "cfn2" => Ok(MethodKind::Cfn2),
            "cft" => Ok(MethodKind::Cft),
            "rlfn1" => Ok(MethodKind::Rlfn1),
            "rlfn2" => Ok(MethodKind::Rlfn2),
            "rlft" => Ok(MethodKind::Rlft),
            other => Err(Error::domain(format!(
                "unknown method {other:?}; expected one of cfn1, cfn2, cft, rlfn1, rlfn2, rlft"
            ))),
        }
    }
}

/// Iteration parameters: fractional order, base point, and the stopping
/// protocol knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    alpha: f64,
    base: f64,
    max_iterations: usize,
    step_tol: f64,
    residual_tol: f64,
}

impl SolverConfig {
    /// Config with the standard stopping protocol: at most 500 iterations,
    /// step tolerance `1e-8`, residual tolerance `1e-8`.
    pub fn new(alpha: f64, base: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !base.is_finite() {
            return Err(Error::domain(format!("base point must be finite, got {base}")));
        }
        Ok(Self { alpha, base, max_iterations: 500, step_tol: 1e-8, residual_tol: 1e-8 })
    }

    /// Replace the iteration cap (must be at least 1).
    pub fn with_max_iterations(mut self, max_iterations: usize) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::domain("max_iterations must be at least 1"));
        }
        self.max_iterations = max_iterations;
        Ok(self)
    }

    /// Replace the step tolerance (must be positive and finite).
    pub fn with_step_tol(mut self, step_tol: f64) -> Result<Self> {
        if !step_tol.is_finite() || step_tol <= 0.0 {
            return Err(Error::domain(format!("step tolerance must be positive, got {step_tol}")));
        }
        self.step_tol = step_tol;
        Ok(self)
    }

    /// Replace the residual tolerance (must be positive and finite).
    pub fn with_residual_tol(mut self, residual_tol: f64) -> Result<Self> {
        if !residual_tol.is_finite() || residual_tol <= 0.0 {
            return Err(Error::domain(format!(
                "residual tolerance must be positive, got {residual_tol}"
            )));
        }
        self.residual_tol = residual_tol;
        Ok(self)
    }

    /// The fractional order.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The lower terminal of the fractional derivative.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Iteration cap.
    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    /// Step-size tolerance (checked first at each iteration).
    pub fn step_tol(&self) -> f64 {
        self.step_tol
    }

    /// Residual tolerance (checked after the step-size test).
    pub fn residual_tol(&self) -> f64 {
        self.residual_tol
    }
}

/// Why an iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationStatus {
    /// `|f(x_k)| < residual_tol`.
    ConvergedResidual,
    /// `|x_{k+1} - x_k| < step_tol`.
    ConvergedStep,
    /// The iteration cap was reached without convergence.
    MaxIterations,
    /// A step could not be completed; the trace ends with a NaN iterate.
    NumericalFailure,
}

impl TerminationStatus {
    /// Whether the status indicates convergence (by either criterion).
    pub fn converged(&self) -> bool {
        matches!(self, TerminationStatus::ConvergedResidual | TerminationStatus::ConvergedStep)
    }
}

impl fmt::Display for TerminationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TerminationStatus::ConvergedResidual => "converged-residual",
            TerminationStatus::ConvergedStep => "converged-step",
            TerminationStatus::MaxIterations => "max-iterations",
            TerminationStatus::NumericalFailure => "numerical-failure",
        };
        f.write_str(s)
    }
}

/// Full record of one iteration run.
///
/// Invariant: `iterates.len() == residuals.len() == iterations + 1`; entry 0
/// is the starting point. After a numerical failure the final iterate and
/// residual are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// The method that produced the trace.
    pub method: MethodKind,
    /// The fractional order it ran at.
    pub alpha: f64,
    /// All iterates, starting point first.
    pub iterates: Vec<ComplexValue>,
    /// `|f(x_k)|` for each iterate.
    pub residuals: Vec<f64>,
    /// Why the iteration stopped.
    pub status: TerminationStatus,
    /// Number of iteration steps taken (one less than the trace length).
    pub iterations: usize,
}

impl IterationTrace {
    /// The last iterate (NaN after a numerical failure).
    pub fn final_iterate(&self) -> ComplexValue {
        *self.iterates.last().expect("trace is never empty")
    }

    /// `|f|` at the last iterate (NaN after a numerical failure).
    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().expect("trace is never empty")
    }
}

/// Principal-branch complex power `z^r` with real exponent.
///
/// Exponent 1 returns `z` unchanged (so `alpha = 1` reproduces classical
/// iterations exactly); a `-0.0` imaginary part is normalized to `+0.0`
/// before taking the branch, putting negative real arguments on the upper
/// branch (`Arg = pi`).
///
/// # Errors
///
/// [`Error::Domain`] for a non-finite exponent or for `0^r` with `r <= 0`.
pub fn principal_power(z: ComplexValue, r: f64) -> Result<ComplexValue> {
    if !r.is_finite() {
        return Err(Error::domain(format!("power exponent must be finite, got {r}")));
    }
    if r == 1.0 {
        return Ok(z);
    }
    let mut z = z;
    if z.im == 0.0 {
        z.im = 0.0;
    }
    if z == ComplexValue::new(0.0, 0.0) {
        if r > 0.0 {
            return Ok(ComplexValue::new(0.0, 0.0));
        }
        return Err(Error::domain(format!("zero cannot be raised to the nonpositive power {r}")));
    }
    Ok((z.ln() * r).exp())
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

/// Derivative evaluator selected once per run: classical at `alpha = 1`,
/// compiled fractional closed form otherwise.
enum PreparedDeriv {
    Classical(PreparedEval),
    Fractional(PreparedFrac),
}

impl PreparedDeriv {
    fn eval(&self, x: ComplexValue) -> Result<ComplexValue> {
        match self {
            PreparedDeriv::Classical(p) => Ok(p.eval(x)),
            PreparedDeriv::Fractional(p) => p.eval(x),
        }
    }
}

/// One method compiled against one model at one fractional order: the
/// single iteration implementation behind both [`solve`] and the plane
/// rasterizer, as well as the public one-step functions.
pub(crate) struct Engine {
    family: Family,
    prep_f: PreparedEval,
    deriv: PreparedDeriv,
    gamma_a1: f64,
    inv_alpha: f64,
}

impl Engine {
    pub(crate) fn new(
        method: MethodKind,
        f: &FunctionModel,
        alpha: f64,
        base: f64,
    ) -> Result<Self> {
        if base != f.reference_point() {
            return Err(Error::BaseMismatch { base, reference_point: f.reference_point() });
        }
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        let deriv = if alpha == 1.0 {
            PreparedDeriv::Classical(PreparedEval::classical_of(f))
        } else {
            PreparedDeriv::Fractional(PreparedFrac::new(f, method.deriv_kind(), alpha)?)
        };
        Ok(Self {
            family: method.family(),
            prep_f: PreparedEval::value_of(f),
            deriv,
            gamma_a1: gamma_real(alpha + 1.0)?,
            inv_alpha: 1.0 / alpha,
        })
    }

    /// `|f(x)|` through the compiled evaluator.
    pub(crate) fn residual(&self, x: ComplexValue) -> f64 {
        self.prep_f.eval(x).norm()
    }

    /// One update of the configured method.
    pub(crate) fn step(&self, x: ComplexValue) -> Result<ComplexValue> {
        let d = self.deriv.eval(x)?;
        if !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::domain("derivative is not finite at the iterate"));
        }
        if d == ComplexValue::new(0.0, 0.0) {
            return Err(Error::DerivativeZero { magnitude: 0.0 });
        }
        let newton = |z: ComplexValue| self.gamma_a1 * self.prep_f.eval(z) / d;
        match self.family {
            Family::Newton1 => Ok(x - newton(x)),
            Family::Newton2 => Ok(x - principal_power(newton(x), self.inv_alpha)?),
            Family::Traub => {
                let y = x - principal_power(newton(x), self.inv_alpha)?;
                Ok(y - principal_power(newton(y), self.inv_alpha)?)
            }
        }
    }

    /// Run the iteration from `x0` under the standard stopping protocol,
    /// reporting every iterate (starting point included) and its residual
    /// through `on_point`. Returns the termination status and the number of
    /// steps taken; `on_point` is called exactly `steps + 1` times.
    ///
    /// Protocol, in order, for each step: a step that fails or produces a
    /// non-finite iterate terminates with [`TerminationStatus::NumericalFailure`]
    /// (recording a NaN iterate); otherwise the step-size test
    /// `|x_{k+1} - x_k| < step_tol` is checked first, then the residual test
    /// `|f(x_{k+1})| < residual_tol`. The residual test also applies to the
    /// starting point, so a run can converge in zero steps.
    pub(crate) fn drive(
        &self,
        x0: ComplexValue,
        max_iterations: usize,
        step_tol: f64,
        residual_tol: f64,
        mut on_point: impl FnMut(ComplexValue, f64),
    ) -> (TerminationStatus, usize) {
        let mut x = x0;
        let r0 = self.residual(x0);
        on_point(x0, r0);
        if r0 < residual_tol {
            return (TerminationStatus::ConvergedResidual, 0);
        }
        for k in 1..=max_iterations {
            let next = match self.step(x) {
                Ok(next) if next.re.is_finite() && next.im.is_finite() => next,
                _ => {
                    on_point(ComplexValue::new(f64::NAN, f64::NAN), f64::NAN);
                    return (TerminationStatus::NumericalFailure, k);
                }
            };
            let delta = (next - x).norm();
            let res = self.residual(next);
            on_point(next, res);
            if delta < step_tol {
                return (TerminationStatus::ConvergedStep, k);
            }
            if res < residual_tol {
                return (TerminationStatus::ConvergedResidual, k);
            }
            x = next;
        }
        (TerminationStatus::MaxIterations, max_iterations)
    }
}

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

fn one_step(
    family: Family,
    f: &FunctionModel,
    spec: &FracSpec,
    x: ComplexValue,
) -> Result<ComplexValue> {
    let method = MethodKind::from_parts(family, spec.kind());
    Engine::new(method, f, spec.alpha(), spec.base())?.step(x)
}

/// One damped fractional Newton update
/// `x - Gamma(alpha+1) f(x) / D^alpha f(x)`.
///
/// # Errors
///
/// Model/spec mismatches as in [`crate::funcmodel::frac_derivative`], plus
/// [`Error::DerivativeZero`] when the fractional derivative vanishes at `x`
/// and [`Error::Domain`] when it is not finite there.
pub fn newton1_step(f: &FunctionModel, spec: &FracSpec, x: ComplexValue) -> Result<ComplexValue> {
    one_step(Family::Newton1, f, spec, x)
}

/// One exponent-corrected fractional Newton update
/// `x - [Gamma(alpha+1) f(x) / D^alpha f(x)]^{1/alpha}`.
///
/// # Errors
///
/// As for [`newton1_step`].
pub fn newton2_step(f: &FunctionModel, spec: &FracSpec, x: ComplexValue) -> Result<ComplexValue> {
    one_step(Family::Newton2, f, spec, x)
}

/// One full fractional Traub update: an exponent-corrected Newton stage to
/// `y`, then `y - [Gamma(alpha+1) f(y) / D^alpha f(x)]^{1/alpha}` with the
/// derivative still evaluated at `x`.
///
/// # Errors
///
/// As for [`newton1_step`].
pub fn traub_step(f: &FunctionModel, spec: &FracSpec, x: ComplexValue) -> Result<ComplexValue> {
    one_step(Family::Traub, f, spec, x)
}

/// Run `method` on `f` from `x0` to termination.
///
/// Numerical breakdown mid-run is reported in the returned trace
/// ([`TerminationStatus::NumericalFailure`]), not as an `Err`; errors are
/// reserved for structurally invalid requests (non-finite `x0`, base/
/// reference-point mismatch, exponential terms with a nonzero reference
/// point).
pub fn solve(
    method: MethodKind,
    f: &FunctionModel,
    x0: ComplexValue,
    config: &SolverConfig,
) -> Result<IterationTrace> {
    if !x0.re.is_finite() || !x0.im.is_finite() {
        return Err(Error::domain(format!("starting point must be finite, got {x0}")));
    }
    let engine = Engine::new(method, f, config.alpha, config.base)?;
    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    let (status, iterations) =
        engine.drive(x0, config.max_iterations, config.step_tol, config.residual_tol, |x, r| {
            iterates.push(x);
            residuals.push(r);
        });
    Ok(IterationTrace { method, alpha: config.alpha, iterates, residuals, status, iterations })
}
