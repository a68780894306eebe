//! Symbolic function models and their fractional derivatives.
//!
//! A [`FunctionModel`] is a finite sum
//!
//! ```text
//! f(x) = sum_i c_i (x - a)^{p_i}  +  sum_j d_j exp(lambda_j x)
//! ```
//!
//! with complex coefficients `c_i`, `d_j`, real exponents `p_i >= 0`, complex
//! rates `lambda_j`, and a real reference point `a`. For this family both the
//! Caputo and the Riemann-Liouville fractional derivatives of order
//! `nu > 0` with lower terminal `a` have closed forms:
//!
//! * power terms follow the fractional power rule
//!   `D^nu (x-a)^p = Gamma(p+1)/Gamma(p+1-nu) * (x-a)^{p-nu}` (the Caputo
//!   derivative of a constant is zero; the Riemann-Liouville one is not);
//! * exponential terms (reference point 0 required) produce Mittag-Leffler
//!   functions: `D^nu_C e^{lx} = l^m x^{m-nu} E_{1,m-nu+1}(lx)` with
//!   `m = ceil(nu)`, and `D^nu_RL e^{lx} = x^{-nu} E_{1,1-nu}(lx)`.
//!
//! The module exposes the closed forms through [`frac_derivative`], a
//! derivative-free-of-closed-forms cross-check through
//! [`frac_derivative_quadrature`] (adaptive Gauss-Kronrod on the defining
//! integral), plus evaluation, classical differentiation, rebasing of
//! integer-exponent models, JSON (de)serialization, and the built-in test
//! functions `f1`..`f4`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::specfun::{
    gamma_ratio_real, gamma_real, mittag_leffler, pole_distance, recip_gamma, MLParams, POLE_TOL,
};
use crate::ComplexValue;

/// Largest integer exponent stored in dense (Horner) form; also the largest
/// degree [`recenter_powers`] accepts.
const DENSE_MAX_DEGREE: usize = 1024;

/// Absolute tolerance requested from the quadrature oracle.
const QUAD_ABS_TOL: f64 = 1e-9;

/// Integrand-evaluation budget for one quadrature derivative.
const QUAD_MAX_EVALS: usize = 1_000_000;

// ---------------------------------------------------------------------------
// Model types
// ---------------------------------------------------------------------------

/// One power term `coeff * (x - a)^exponent` with `exponent >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    coeff: ComplexValue,
    exponent: f64,
}

impl PowerTerm {
    /// Validated constructor: the coefficient must be finite and the
    /// exponent a finite nonnegative real.
    pub fn new(coeff: ComplexValue, exponent: f64) -> Result<Self> {
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(Error::domain(format!("power coefficient must be finite, got {coeff}")));
        }
        if !exponent.is_finite() || exponent < 0.0 {
            return Err(Error::domain(format!(
                "power exponent must be finite and nonnegative, got {exponent}"
            )));
        }
        Ok(Self { coeff, exponent })
    }

    /// The complex coefficient `c`.
    pub fn coeff(&self) -> ComplexValue {
        self.coeff
    }

    /// The real exponent `p >= 0`.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }
}

/// One exponential term `coeff * exp(rate * x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    coeff: ComplexValue,
    rate: ComplexValue,
}

impl ExpTerm {
    /// Validated constructor: both parts must be finite.
    pub fn new(coeff: ComplexValue, rate: ComplexValue) -> Result<Self> {
        for (label, z) in [("coefficient", coeff), ("rate", rate)] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::domain(format!("exponential {label} must be finite, got {z}")));
            }
        }
        Ok(Self { coeff, rate })
    }

    /// The complex coefficient `d`.
    pub fn coeff(&self) -> ComplexValue {
        self.coeff
    }

    /// The complex rate `lambda`.
    pub fn rate(&self) -> ComplexValue {
        self.rate
    }
}

/// A model function: power terms centered at a reference point plus
/// exponential terms.
///
/// The constructor canonicalizes the representation: power terms with equal
/// exponents and exponential terms with equal rates are merged, zero terms
/// are dropped, and the terms are sorted (powers by exponent, exponentials
/// by rate). Two models built from the same mathematical function therefore
/// compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionModel {
    power_terms: Vec<PowerTerm>,
    exp_terms: Vec<ExpTerm>,
    reference_point: f64,
}

impl FunctionModel {
    /// Validated, canonicalizing constructor.
    pub fn new(
        power_terms: Vec<PowerTerm>,
        exp_terms: Vec<ExpTerm>,
        reference_point: f64,
    ) -> Result<Self> {
        if !reference_point.is_finite() {
            return Err(Error::domain(format!(
                "reference point must be finite, got {reference_point}"
            )));
        }
        let mut powers = power_terms;
        powers.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut merged_powers: Vec<PowerTerm> = Vec::with_capacity(powers.len());
        for t in powers {
            match merged_powers.last_mut() {
                Some(last) if last.exponent == t.exponent => last.coeff += t.coeff,
                _ => merged_powers.push(t),
            }
        }
        merged_powers.retain(|t| t.coeff != ComplexValue::new(0.0, 0.0));

        let mut exps = exp_terms;
        exps.sort_by(|a, b| {
            a.rate.re.total_cmp(&b.rate.re).then_with(|| a.rate.im.total_cmp(&b.rate.im))
        });
        let mut merged_exps: Vec<ExpTerm> = Vec::with_capacity(exps.len());
        for t in exps {
            match merged_exps.last_mut() {
                Some(last) if last.rate == t.rate => last.coeff += t.coeff,
                _ => merged_exps.push(t),
            }
        }
        merged_exps.retain(|t| t.coeff != ComplexValue::new(0.0, 0.0));

        Ok(Self { power_terms: merged_powers, exp_terms: merged_exps, reference_point })
    }

    /// Power terms, sorted by ascending exponent.
    pub fn power_terms(&self) -> &[PowerTerm] {
        &self.power_terms
    }

    /// Exponential terms, sorted by rate.
    pub fn exp_terms(&self) -> &[ExpTerm] {
        &self.exp_terms
    }

    /// The reference point `a` the power terms are centered at.
    pub fn reference_point(&self) -> f64 {
        self.reference_point
    }

    /// Parse a model from its JSON representation.
    ///
    /// The format is an object with optional `reference_point` (default 0),
    /// `power_terms` (array of `{re, im, p}`, `im` defaulting to 0) and
    /// `exp_terms` (array of `{coeff_re, coeff_im, rate_re, rate_im}`, the
    /// imaginary parts defaulting to 0). Unknown fields are rejected.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let dto: ModelDto = serde_json::from_str(s)
            .map_err(|e| Error::domain(format!("invalid model JSON: {e}")))?;
        let mut powers = Vec::with_capacity(dto.power_terms.len());
        for t in &dto.power_terms {
            powers.push(PowerTerm::new(ComplexValue::new(t.re, t.im), t.p)?);
        }
        let mut exps = Vec::with_capacity(dto.exp_terms.len());
        for t in &dto.exp_terms {
            exps.push(ExpTerm::new(
                ComplexValue::new(t.coeff_re, t.coeff_im),
                ComplexValue::new(t.rate_re, t.rate_im),
            )?);
        }
        Self::new(powers, exps, dto.reference_point)
    }

    /// Serialize the model to pretty-printed JSON accepted by
    /// [`FunctionModel::from_json_str`].
    pub fn to_json_string(&self) -> String {
        let dto = ModelDto {
            reference_point: self.reference_point,
            power_terms: self
                .power_terms
                .iter()
                .map(|t| PowerTermDto { re: t.coeff.re, im: t.coeff.im, p: t.exponent })
                .collect(),
            exp_terms: self
                .exp_terms
                .iter()
                .map(|t| ExpTermDto {
                    coeff_re: t.coeff.re,
                    coeff_im: t.coeff.im,
                    rate_re: t.rate.re,
                    rate_im: t.rate.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("model serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDto {
    #[serde(default)]
    reference_point: f64,
    #[serde(default)]
    power_terms: Vec<PowerTermDto>,
    #[serde(default)]
    exp_terms: Vec<ExpTermDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerTermDto {
    re: f64,
    #[serde(default)]
    im: f64,
    p: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpTermDto {
    coeff_re: f64,
    #[serde(default)]
    coeff_im: f64,
    rate_re: f64,
    #[serde(default)]
    rate_im: f64,
}

/// Which fractional derivative to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivKind {
    /// Caputo derivative: differentiate after integrating, so the derivative
    /// of a constant is zero.
    Caputo,
    /// Riemann-Liouville derivative: differentiate before integrating, so a
    /// constant picks up an `(x-a)^{-alpha}` tail.
    RiemannLiouville,
}

impl fmt::Display for DerivKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivKind::Caputo => f.write_str("caputo"),
            DerivKind::RiemannLiouville => f.write_str("riemann-liouville"),
        }
    }
}

impl FromStr for DerivKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "caputo" | "c" => Ok(DerivKind::Caputo),
            "riemann-liouville" | "riemann_liouville" | "rl" => Ok(DerivKind::RiemannLiouville),
            other => Err(Error::domain(format!(
                "unknown derivative kind {other:?}; expected \"caputo\" or \"riemann-liouville\""
            ))),
        }
    }
}

/// A fractional-derivative specification: order `alpha` in `(0, 1]`, lower
/// terminal `base`, and the derivative kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracSpec {
    alpha: f64,
    base: f64,
    kind: DerivKind,
}

impl FracSpec {
    /// Validated constructor; `alpha` must lie in `(0, 1]`.
    pub fn new(alpha: f64, base: f64, kind: DerivKind) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !base.is_finite() {
            return Err(Error::domain(format!("base point must be finite, got {base}")));
        }
        Ok(Self { alpha, base, kind })
    }

    /// The fractional order.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The lower terminal of the fractional integral.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Caputo or Riemann-Liouville.
    pub fn kind(&self) -> DerivKind {
        self.kind
    }
}

// ---------------------------------------------------------------------------
// Evaluation and classical differentiation
// ---------------------------------------------------------------------------

/// Shift `x` by the reference point, normalizing a `-0.0` imaginary part to
/// `+0.0` so that principal powers of negative real arguments consistently
/// take the upper branch (`Arg` in `(-pi, pi]`).
fn shifted(x: ComplexValue, base: f64) -> ComplexValue {
    let mut s = x - base;
    if s.im == 0.0 {
        s.im = 0.0;
    }
    s
}

/// Evaluate the model at a complex point. Total: power terms with positive
/// exponents vanish at the reference point and the principal branch is used
/// for non-integer exponents off it.
pub fn eval(f: &FunctionModel, x: ComplexValue) -> ComplexValue {
    PreparedEval::value_of(f).eval(x)
}

/// Evaluate the classical first derivative `f'(x)`.
///
/// # Errors
///
/// [`Error::BranchPoint`] if `x` equals the reference point while the model
/// contains a power term with exponent in `(0, 1)`, where `f'` is unbounded.
pub fn classical_derivative(f: &FunctionModel, x: ComplexValue) -> Result<ComplexValue> {
    let s = shifted(x, f.reference_point);
    let mut acc = ComplexValue::new(0.0, 0.0);
    for t in &f.power_terms {
        let p = t.exponent;
        if p == 0.0 {
            continue;
        }
        let q = p - 1.0;
        if s == ComplexValue::new(0.0, 0.0) {
            if q < 0.0 {
                return Err(Error::BranchPoint { exponent: p });
            }
            if q == 0.0 {
                acc += t.coeff;
            }
        } else {
            acc += t.coeff * p * cpow(s, q);
        }
    }
    for t in &f.exp_terms {
        acc += t.coeff * t.rate * (t.rate * x).exp();
    }
    Ok(acc)
}

/// `s^e` for real `e`, assuming `s != 0` whenever `e < 0`. Integer exponents
/// use exact repeated squaring; the rest take the principal branch.
fn cpow(s: ComplexValue, e: f64) -> ComplexValue {
    if e == 0.0 {
        ComplexValue::new(1.0, 0.0)
    } else if e.fract() == 0.0 && e.abs() <= DENSE_MAX_DEGREE as f64 {
        s.powi(e as i32)
    } else {
        s.powf(e)
    }
}

// ---------------------------------------------------------------------------
// Prepared evaluators
// ---------------------------------------------------------------------------

/// A model compiled for repeated evaluation: integer-exponent power terms
/// collapse to one Horner polynomial, non-integer terms share a single
/// complex logarithm, and exponential terms are stored as `(front, rate)`
/// pairs (evaluated at `x`, not at the shifted argument).
///
/// Evaluation is total; an argument exactly at the reference point combined
/// with a negative stored exponent yields NaN, which iteration drivers treat
/// as numerical failure.
pub(crate) struct PreparedEval {
    base: f64,
    poly: Vec<ComplexValue>,
    sparse: Vec<(ComplexValue, f64)>,
    exps: Vec<(ComplexValue, ComplexValue)>,
}

impl PreparedEval {
    /// Compile the model itself.
    pub(crate) fn value_of(f: &FunctionModel) -> Self {
        let mut prep = PreparedEval {
            base: f.reference_point,
            poly: Vec::new(),
            sparse: Vec::new(),
            exps: Vec::new(),
        };
        for t in &f.power_terms {
            prep.push_power(t.coeff, t.exponent);
        }
        for t in &f.exp_terms {
            prep.exps.push((t.coeff, t.rate));
        }
        prep
    }

    /// Compile the classical first derivative of the model.
    pub(crate) fn classical_of(f: &FunctionModel) -> Self {
        let mut prep = PreparedEval {
            base: f.reference_point,
            poly: Vec::new(),
            sparse: Vec::new(),
            exps: Vec::new(),
        };
        for t in &f.power_terms {
            if t.exponent != 0.0 {
                prep.push_power(t.coeff * t.exponent, t.exponent - 1.0);
            }
        }
        for t in &f.exp_terms {
            let front = t.coeff * t.rate;
            if front != ComplexValue::new(0.0, 0.0) {
                prep.exps.push((front, t.rate));
            }
        }
        prep
    }

    fn push_power(&mut self, coeff: ComplexValue, exponent: f64) {
        if exponent >= 0.0 && exponent.fract() == 0.0 && exponent <= DENSE_MAX_DEGREE as f64 {
            let k = exponent as usize;
            if self.poly.len() <= k {
                self.poly.resize(k + 1, ComplexValue::new(0.0, 0.0));
            }
            self.poly[k] += coeff;
        } else {
            self.sparse.push((coeff, exponent));
        }
    }

    pub(crate) fn eval(&self, x: ComplexValue) -> ComplexValue {
        let s = shifted(x, self.base);
        let mut acc = horner(&self.poly, s);
        if !self.sparse.is_empty() {
            if s == ComplexValue::new(0.0, 0.0) {
                for &(_, e) in &self.sparse {
                    if e < 0.0 {
                        return ComplexValue::new(f64::NAN, f64::NAN);
                    }
                }
                // All sparse exponents are positive non-integers: their
                // contribution at the reference point is zero.
            } else {
                let ln_s = s.ln();
                for &(c, e) in &self.sparse {
                    acc += c * (ln_s * e).exp();
                }
            }
        }
        for &(front, rate) in &self.exps {
            acc += front * (rate * x).exp();
        }
        acc
    }
}

/// Horner evaluation of a dense ascending-coefficient polynomial.
fn horner(poly: &[ComplexValue], s: ComplexValue) -> ComplexValue {
    let mut acc = ComplexValue::new(0.0, 0.0);
    for c in poly.iter().rev() {
        acc = acc * s + c;
    }
    acc
}

/// Weight `Gamma(p+1)/Gamma(p+1-nu)` of the fractional power rule; zero when
/// the denominator sits on a Gamma pole (the term is annihilated).
fn power_weight(p: f64, nu: f64) -> Result<f64> {
    let den = p + 1.0 - nu;
    if pole_distance(ComplexValue::new(den, 0.0)) <= POLE_TOL {
        return Ok(0.0);
    }
    if den > 0.5 {
        gamma_ratio_real(p + 1.0, den)
    } else if p + 1.0 < 170.0 {
        Ok(gamma_real(p + 1.0)? * recip_gamma(den))
    } else {
        Err(Error::domain(format!(
            "cannot form the fractional power-rule weight for exponent {p} at order {nu}"
        )))
    }
}

/// One compiled exponential term of a fractional derivative:
/// `front * s^{s_exp} * E_{1,b}(rate * s)`.
struct FracExp {
    front: ComplexValue,
    s_exp: f64,
    params: MLParams,
    rate: ComplexValue,
}

/// A fractional derivative compiled for repeated evaluation.
///
/// When every power exponent is an integer the derivative collapses to
/// `s^{-nu} * P(s)` with `P` a polynomial, costing one principal power and
/// one Horner pass per evaluation; otherwise the terms share one complex
/// logarithm. This is the single implementation backing [`frac_derivative`],
/// the iteration drivers, and the plane rasterizer.
pub(crate) struct PreparedFrac {
    base: f64,
    dense: Option<(f64, Vec<ComplexValue>)>,
    sparse: Vec<(ComplexValue, f64)>,
    exps: Vec<FracExp>,
}

impl PreparedFrac {
    /// Compile the order-`nu` fractional derivative of `f` (lower terminal
    /// at the model's reference point). `nu` may exceed 1 to support
    /// higher-order analysis; iteration code always passes `nu` in `(0, 1)`.
    ///
    /// # Errors
    ///
    /// [`Error::ExpBase`] if the model has exponential terms but a nonzero
    /// reference point (the closed form needs the lower terminal at 0), and
    /// [`Error::Domain`] for a non-positive or non-finite `nu`.
    pub(crate) fn new(f: &FunctionModel, kind: DerivKind, nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::domain(format!(
                "fractional order must be positive and finite, got {nu}"
            )));
        }
        if !f.exp_terms.is_empty() && f.reference_point != 0.0 {
            return Err(Error::ExpBase { base: f.reference_point });
        }

        let all_integer = f
            .power_terms
            .iter()
            .all(|t| t.exponent.fract() == 0.0 && t.exponent <= DENSE_MAX_DEGREE as f64);
        let mut dense: Option<(f64, Vec<ComplexValue>)> = None;
        let mut sparse: Vec<(ComplexValue, f64)> = Vec::new();
        let mut push = |coeff: ComplexValue, p: f64| {
            if coeff == ComplexValue::new(0.0, 0.0) {
                return;
            }
            if all_integer {
                let (_, poly) = dense.get_or_insert_with(|| (-nu, Vec::new()));
                let k = p as usize;
                if poly.len() <= k {
                    poly.resize(k + 1, ComplexValue::new(0.0, 0.0));
                }
                poly[k] += coeff;
            } else {
                sparse.push((coeff, p - nu));
            }
        };
        for t in &f.power_terms {
            if t.exponent == 0.0 && kind == DerivKind::Caputo {
                continue;
            }
            push(t.coeff * power_weight(t.exponent, nu)?, t.exponent);
        }

        let mut exps = Vec::with_capacity(f.exp_terms.len());
        for t in &f.exp_terms {
            let term = match kind {
                DerivKind::Caputo => {
                    let m = nu.ceil();
                    FracExp {
                        front: t.coeff * t.rate.powi(m as i32),
                        s_exp: m - nu,
                        params: MLParams::new(1.0, m - nu + 1.0)?,
                        rate: t.rate,
                    }
                }
                DerivKind::RiemannLiouville => FracExp {
                    front: t.coeff,
                    s_exp: -nu,
                    params: MLParams::new(1.0, 1.0 - nu)?,
                    rate: t.rate,
                },
            };
            if term.front != ComplexValue::new(0.0, 0.0) {
                exps.push(term);
            }
        }

        Ok(Self { base: f.reference_point, dense, sparse, exps })
    }

    /// Evaluate the compiled derivative at `x`.
    ///
    /// # Errors
    ///
    /// [`Error::Singularity`] at `x` equal to the base point whenever a term
    /// carries a negative output exponent there, and any Mittag-Leffler
    /// evaluation failure ([`Error::Domain`] for arguments outside its
    /// reliable range, [`Error::ConvergenceBudget`] on series exhaustion).
    pub(crate) fn eval(&self, x: ComplexValue) -> Result<ComplexValue> {
        let s = shifted(x, self.base);
        let mut acc = ComplexValue::new(0.0, 0.0);
        if s == ComplexValue::new(0.0, 0.0) {
            if let Some((common, poly)) = &self.dense {
                for (k, c) in poly.iter().enumerate() {
                    if *c == ComplexValue::new(0.0, 0.0) {
                        continue;
                    }
                    let e = k as f64 + common;
                    if e < 0.0 {
                        return Err(singular_at_base(e));
                    }
                    if e == 0.0 {
                        acc += c;
                    }
                }
            }
            for &(c, e) in &self.sparse {
                if e < 0.0 {
                    return Err(singular_at_base(e));
                }
                if e == 0.0 {
                    acc += c;
                }
            }
            for t in &self.exps {
                if t.s_exp < 0.0 {
                    return Err(singular_at_base(t.s_exp));
                }
                if t.s_exp == 0.0 {
                    acc += t.front * mittag_leffler(t.params, ComplexValue::new(0.0, 0.0))?;
                }
            }
            return Ok(acc);
        }

        let ln_s = s.ln();
        if let Some((common, poly)) = &self.dense {
            acc += (ln_s * *common).exp() * horner(poly, s);
        }
        for &(c, e) in &self.sparse {
            acc += c * (ln_s * e).exp();
        }
        for t in &self.exps {
            let power =
                if t.s_exp == 0.0 { ComplexValue::new(1.0, 0.0) } else { (ln_s * t.s_exp).exp() };
            acc += t.front * power * mittag_leffler(t.params, t.rate * s)?;
        }
        Ok(acc)
    }
}

fn singular_at_base(out_exponent: f64) -> Error {
    Error::singular(format!(
        "fractional derivative carries a term proportional to s^{out_exponent} and is singular \
         at the base point"
    ))
}

// ---------------------------------------------------------------------------
// Public fractional derivatives
// ---------------------------------------------------------------------------

/// Evaluate the closed-form fractional derivative `D^alpha f(x)`.
///
/// At `alpha = 1` both kinds coincide with the classical derivative and the
/// call routes to [`classical_derivative`] bit-for-bit, so iteration at
/// `alpha = 1` reproduces the classical methods exactly.
///
/// # Errors
///
/// [`Error::BaseMismatch`] if `spec.base()` differs from the model's
/// reference point, [`Error::ExpBase`] for exponential terms with a nonzero
/// reference point, [`Error::Singularity`] for an evaluation at the base
/// point where the derivative blows up, and Mittag-Leffler failures as in
/// [`PreparedFrac::eval`].
pub fn frac_derivative(
    f: &FunctionModel,
    spec: &FracSpec,
    x: ComplexValue,
) -> Result<ComplexValue> {
    if spec.base != f.reference_point {
        return Err(Error::BaseMismatch { base: spec.base, reference_point: f.reference_point });
    }
    if spec.alpha == 1.0 {
        return classical_derivative(f, x);
    }
    PreparedFrac::new(f, spec.kind, spec.alpha)?.eval(x)
}

/// Closed-form fractional derivative of arbitrary positive order `nu`, with
/// the lower terminal fixed at the model's own reference point. Orders above
/// 1 are meaningful here (the convergence analysis needs `D^{j alpha}` for
/// `j` up to 3); no classical rerouting happens at integer `nu`, but the
/// closed forms collapse to the classical derivatives there anyway.
pub(crate) fn frac_derivative_nu(
    f: &FunctionModel,
    kind: DerivKind,
    nu: f64,
    x: ComplexValue,
) -> Result<ComplexValue> {
    PreparedFrac::new(f, kind, nu)?.eval(x)
}

/// Evaluate `D^alpha f(x)` by adaptive quadrature on the defining integral,
/// independently of the closed forms (no Gamma-ratio weights, no
/// Mittag-Leffler series).
///
/// The Caputo integral is regularized by the substitution
/// `t = base + (x - base)(1 - tau^q)` with `q = 1/(1-alpha)`, under which the
/// weak endpoint singularity `(x-t)^{-alpha}` cancels exactly:
///
/// ```text
/// D^alpha_C f(x) = (x-base)^{1-alpha} / Gamma(2-alpha)
///                  * int_0^1 f'(base + (x-base)(1 - tau^q)) dtau
/// ```
///
/// (the Jacobian factor `q` of the substitution is absorbed by
/// `Gamma(2-alpha) = (1-alpha) Gamma(1-alpha)`),
///
/// and the Riemann-Liouville value adds the lower-terminal tail
/// `f(base) (x-base)^{-alpha} / Gamma(1-alpha)`.
///
/// # Errors
///
/// [`Error::BaseMismatch`] on a base/reference-point disagreement,
/// [`Error::Domain`] unless `x` is finite and strictly greater than the
/// base, and [`Error::Quadrature`] if the evaluation budget is exhausted
/// before the error estimate reaches tolerance.
pub fn frac_derivative_quadrature(
    f: &FunctionModel,
    spec: &FracSpec,
    x: f64,
) -> Result<ComplexValue> {
    if spec.base != f.reference_point {
        return Err(Error::BaseMismatch { base: spec.base, reference_point: f.reference_point });
    }
    if !x.is_finite() || x <= spec.base {
        return Err(Error::domain(format!(
            "quadrature derivative requires a finite x strictly greater than the base point, \
             got x={x} with base {}",
            spec.base
        )));
    }
    if spec.alpha == 1.0 {
        return classical_derivative(f, ComplexValue::new(x, 0.0));
    }
    let alpha = spec.alpha;
    let q = 1.0 / (1.0 - alpha);
    let dx = x - spec.base;
    let base = spec.base;
    let deriv = PreparedEval::classical_of(f);
    // 1 - tau^q via expm1 keeps full precision where tau^q is close to 1.
    let mut g = |tau: f64| deriv.eval(ComplexValue::new(base + dx * -(q * tau.ln()).exp_m1(), 0.0));
    let integral =
        integrate_adaptive(&mut g, &graded_unit_breakpoints(), QUAD_ABS_TOL, QUAD_MAX_EVALS)?;
    let caputo = integral * (dx.powf(1.0 - alpha) / gamma_real(2.0 - alpha)?);
    match spec.kind {
        DerivKind::Caputo => Ok(caputo),
        DerivKind::RiemannLiouville => {
            let tail = eval(f, ComplexValue::new(base, 0.0))
                * (dx.powf(-alpha) * recip_gamma(1.0 - alpha));
            Ok(caputo + tail)
        }
    }
}

/// Panel seeds on `[0, 1]`, geometrically graded toward the endpoint 1 where
/// the substituted integrand inherits whatever endpoint behavior `f'` has at
/// the base point, plus a few panels graded toward 0 for steep maps (large
/// `q` compresses all variation near the endpoints).
fn graded_unit_breakpoints() -> Vec<f64> {
    let mut pts = vec![0.0];
    for k in (1..=6).rev() {
        pts.push(2f64.powi(-k));
    }
    for k in 2..=28 {
        pts.push(1.0 - 2f64.powi(-k));
    }
    pts.push(1.0);
    pts
}

// ---------------------------------------------------------------------------
// Rebasing
// ---------------------------------------------------------------------------

/// Re-express the power terms of `f` around a new reference point.
///
/// Only models whose power exponents are all nonnegative integers can be
/// rebased exactly (the binomial expansion terminates); exponential terms
/// are independent of the reference point and survive unchanged, but only
/// when the new reference point is 0, because the closed-form fractional
/// derivatives of exponential terms require a zero lower terminal.
///
/// # Errors
///
/// [`Error::NonIntegerExponent`] for a fractional power exponent,
/// [`Error::ExpBase`] when exponential terms are present and `new_base` is
/// nonzero, and [`Error::Domain`] for degrees beyond 1024 or coefficient
/// overflow during expansion.
pub fn recenter_powers(f: &FunctionModel, new_base: f64) -> Result<FunctionModel> {
    if !new_base.is_finite() {
        return Err(Error::domain(format!("new reference point must be finite, got {new_base}")));
    }
    if !f.exp_terms.is_empty() && new_base != 0.0 {
        return Err(Error::ExpBase { base: new_base });
    }
    let mut degree = 0usize;
    for t in &f.power_terms {
        if t.exponent.fract() != 0.0 {
            return Err(Error::NonIntegerExponent { exponent: t.exponent });
        }
        if t.exponent > DENSE_MAX_DEGREE as f64 {
            return Err(Error::domain(format!(
                "cannot rebase a power term of degree {} (limit {DENSE_MAX_DEGREE})",
                t.exponent
            )));
        }
        degree = degree.max(t.exponent as usize);
    }
    let delta = new_base - f.reference_point;
    if delta == 0.0 {
        let mut same = f.clone();
        same.reference_point = new_base;
        return Ok(same);
    }
    let mut coeffs = vec![ComplexValue::new(0.0, 0.0); degree + 1];
    for t in &f.power_terms {
        let p = t.exponent as usize;
        // (s_old)^p = (s_new + delta)^p expanded binomially.
        for (k, coeff) in coeffs.iter_mut().enumerate().take(p + 1) {
            let w = crate::specfun::binom_general(p as f64, k as u32) * delta.powi((p - k) as i32);
            *coeff += t.coeff * w;
        }
    }
    let mut powers = Vec::with_capacity(coeffs.len());
    for (k, c) in coeffs.into_iter().enumerate() {
        if c != ComplexValue::new(0.0, 0.0) {
            powers.push(PowerTerm::new(c, k as f64)?);
        }
    }
    FunctionModel::new(powers, f.exp_terms.clone(), new_base)
}

// ---------------------------------------------------------------------------
// Built-in test functions
// ---------------------------------------------------------------------------

/// The built-in model functions used across tests, examples, and the CLI:
///
/// * `f1` — degree-6 real polynomial
///   `-12.84x^6 - 25.6x^5 + 16.55x^4 - 2.21x^3 + 26.71x^2 - 4.29x - 15.21`;
/// * `f2` — non-polynomial power model `i x^1.8 - x^0.9 - 16`;
/// * `f3` — `e^x - 1`;
/// * `f4` — `sin(10x) - x/2 + 1/5`, stored as two conjugate complex
///   exponentials plus a linear part.
///
/// Names are matched case-insensitively; unknown names yield `None`.
pub fn builtin_model(name: &str) -> Option<FunctionModel> {
    fn pt(re: f64, im: f64, p: f64) -> PowerTerm {
        PowerTerm::new(ComplexValue::new(re, im), p).expect("built-in power term is valid")
    }
    fn et(cre: f64, cim: f64, rre: f64, rim: f64) -> ExpTerm {
        ExpTerm::new(ComplexValue::new(cre, cim), ComplexValue::new(rre, rim))
            .expect("built-in exponential term is valid")
    }
    let model = match name.to_ascii_lowercase().as_str() {
        "f1" => FunctionModel::new(
            vec![
                pt(-12.84, 0.0, 6.0),
                pt(-25.6, 0.0, 5.0),
                pt(16.55, 0.0, 4.0),
                pt(-2.21, 0.0, 3.0),
                pt(26.71, 0.0, 2.0),
                pt(-4.29, 0.0, 1.0),
                pt(-15.21, 0.0, 0.0),
            ],
            vec![],
            0.0,
        ),
        "f2" => FunctionModel::new(
            vec![pt(0.0, 1.0, 1.8), pt(-1.0, 0.0, 0.9), pt(-16.0, 0.0, 0.0)],
            vec![],
            0.0,
        ),
        "f3" => FunctionModel::new(vec![pt(-1.0, 0.0, 0.0)], vec![et(1.0, 0.0, 1.0, 0.0)], 0.0),
        // sin(10x) = (e^{10ix} - e^{-10ix}) / (2i)
        "f4" => FunctionModel::new(
            vec![pt(-0.5, 0.0, 1.0), pt(0.2, 0.0, 0.0)],
            vec![et(0.0, -0.5, 0.0, 10.0), et(0.0, 0.5, 0.0, -10.0)],
            0.0,
        ),
        _ => return None,
    };
    Some(model.expect("built-in model is valid"))
}

/// Reference roots of the built-in models, to five or more significant
/// digits — enough to classify converged iterates against. `f3`'s root is
/// exact; the `f4` list contains its 13 real roots in ascending order.
pub fn builtin_roots(name: &str) -> Option<Vec<ComplexValue>> {
    let c = |re: f64, im: f64| ComplexValue::new(re, im);
    let roots = match name.to_ascii_lowercase().as_str() {
        "f1" => vec![
            c(0.82366, 0.24769),
            c(0.82366, -0.24769),
            c(-2.62297, 0.0),
            c(-0.584, 0.0),
            c(-0.21705, 0.99911),
            c(-0.21705, -0.99911),
        ],
        "f2" => vec![c(2.90807, -4.24908), c(-3.85126, 1.74602)],
        "f3" => vec![c(0.0, 0.0)],
        "f4" => vec![
            c(-1.4523, 0.0),
            c(-1.3647, 0.0),
            c(-0.87345, 0.0),
            c(-0.6857, 0.0),
            c(-0.27949, 0.0),
            c(-0.021219, 0.0),
            c(0.31824, 0.0),
            c(0.64036, 0.0),
            c(0.91636, 0.0),
            c(1.3035, 0.0),
            c(1.5118, 0.0),
            c(1.9756, 0.0),
            c(2.0977, 0.0),
        ],
        _ => return None,
    };
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn constructor_merges_sorts_and_drops_zeros() {
        let f = FunctionModel::new(
            vec![
                PowerTerm::new(c(2.0, 0.0), 3.0).unwrap(),
                PowerTerm::new(c(1.0, 0.0), 1.0).unwrap(),
                PowerTerm::new(c(-2.0, 0.0), 3.0).unwrap(),
                PowerTerm::new(c(4.0, 1.0), 0.0).unwrap(),
            ],
            vec![],
            0.0,
        )
        .unwrap();
        assert_eq!(f.power_terms().len(), 2);
        assert_eq!(f.power_terms()[0].exponent(), 0.0);
        assert_eq!(f.power_terms()[1].exponent(), 1.0);
    }

    #[test]
    fn constructor_rejects_invalid_terms() {
        assert!(PowerTerm::new(c(1.0, 0.0), -0.5).is_err());
        assert!(PowerTerm::new(c(f64::NAN, 0.0), 1.0).is_err());
        assert!(ExpTerm::new(c(1.0, 0.0), c(f64::INFINITY, 0.0)).is_err());
        assert!(FunctionModel::new(vec![], vec![], f64::NAN).is_err());
    }

    #[test]
    fn eval_f1_reference_values() {
        let f = builtin_model("f1").unwrap();
        // Sum of the coefficients at x = 1.
        assert!(close(eval(&f, c(1.0, 0.0)), c(-16.89, 0.0), 1e-14));
        // At the reference point only the constant survives, exactly.
        assert_eq!(eval(&f, c(0.0, 0.0)), c(-15.21, 0.0));
    }

    #[test]
    fn eval_f2_at_base_is_constant() {
        let f = builtin_model("f2").unwrap();
        assert_eq!(eval(&f, c(0.0, 0.0)), c(-16.0, 0.0));
    }

    #[test]
    fn eval_f3_matches_exponential_identities() {
        let f = builtin_model("f3").unwrap();
        assert!(close(eval(&f, c(std::f64::consts::LN_2, 0.0)), c(1.0, 0.0), 1e-15));
        assert!(close(eval(&f, c(0.0, std::f64::consts::PI)), c(-2.0, 0.0), 1e-15));
    }

    #[test]
    fn eval_f4_matches_sine_formula() {
        let f = builtin_model("f4").unwrap();
        for &x in &[-1.3f64, -0.2, 0.7, 2.1] {
            let want = (10.0 * x).sin() - 0.5 * x + 0.2;
            let got = eval(&f, c(x, 0.0));
            assert!(close(got, c(want, 0.0), 1e-14), "x={x}: got {got}, want {want}");
            assert!(got.im.abs() < 1e-14);
        }
    }

    #[test]
    fn classical_derivative_f1_hand_value() {
        let f = builtin_model("f1").unwrap();
        // f1'(1) = -77.04 - 128 + 66.2 - 6.63 + 53.42 - 4.29
        assert!(close(classical_derivative(&f, c(1.0, 0.0)).unwrap(), c(-96.34, 0.0), 1e-13));
    }

    #[test]
    fn classical_derivative_f2_frozen_reference() {
        // d/dx (i x^{1.8} - x^{0.9} - 16) at x = 1+i, principal branch.
        let f = builtin_model("f2").unwrap();
        let got = classical_derivative(&f, c(1.0, 1.0)).unwrap();
        let want = c(-2.262719925052958051505, 1.989715625057721621991);
        assert!(close(got, want, 1e-13), "got {got}");
    }

    #[test]
    fn classical_derivative_branch_point_at_base() {
        let f = builtin_model("f2").unwrap();
        match classical_derivative(&f, c(0.0, 0.0)) {
            Err(Error::BranchPoint { exponent }) => assert_eq!(exponent, 0.9),
            other => panic!("expected branch-point error, got {other:?}"),
        }
    }

    #[test]
    fn caputo_power_rule_frozen_reference() {
        // D^{1/2} of x (base 0) at x = 4: Gamma(2)/Gamma(3/2) * 4^{1/2}.
        let f = FunctionModel::new(vec![PowerTerm::new(c(1.0, 0.0), 1.0).unwrap()], vec![], 0.0)
            .unwrap();
        let spec = FracSpec::new(0.5, 0.0, DerivKind::Caputo).unwrap();
        let got = frac_derivative(&f, &spec, c(4.0, 0.0)).unwrap();
        assert!(close(got, c(2.256758334191025147792, 0.0), 1e-13), "got {got}");
    }

    #[test]
    fn riemann_liouville_constant_frozen_reference() {
        // D^{1/2}_RL of 1 (base 0) at x = 4: 4^{-1/2} / Gamma(1/2).
        let f = FunctionModel::new(vec![PowerTerm::new(c(1.0, 0.0), 0.0).unwrap()], vec![], 0.0)
            .unwrap();
        let rl = FracSpec::new(0.5, 0.0, DerivKind::RiemannLiouville).unwrap();
        let got = frac_derivative(&f, &rl, c(4.0, 0.0)).unwrap();
        assert!(close(got, c(0.282094791773878143474, 0.0), 1e-13), "got {got}");
        // The Caputo derivative of a constant is exactly zero.
        let cap = FracSpec::new(0.5, 0.0, DerivKind::Caputo).unwrap();
        assert_eq!(frac_derivative(&f, &cap, c(4.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn riemann_liouville_singular_at_base() {
        let f = FunctionModel::new(vec![PowerTerm::new(c(1.0, 0.0), 0.0).unwrap()], vec![], 0.0)
            .unwrap();
        let rl = FracSpec::new(0.5, 0.0, DerivKind::RiemannLiouville).unwrap();
        assert!(matches!(frac_derivative(&f, &rl, c(0.0, 0.0)), Err(Error::Singularity { .. })));
    }

    #[test]
    fn caputo_f3_vanishes_at_base_and_rl_is_singular() {
        let f = builtin_model("f3").unwrap();
        let cap = FracSpec::new(0.5, 0.0, DerivKind::Caputo).unwrap();
        assert_eq!(frac_derivative(&f, &cap, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let rl = FracSpec::new(0.5, 0.0, DerivKind::RiemannLiouville).unwrap();
        assert!(matches!(frac_derivative(&f, &rl, c(0.0, 0.0)), Err(Error::Singularity { .. })));
    }

    #[test]
    fn caputo_equals_riemann_liouville_when_f_vanishes_at_base() {
        // f3(0) = 0, so the two derivatives agree although they run through
        // different Mittag-Leffler parameterizations.
        let f = builtin_model("f3").unwrap();
        for &alpha in &[0.3, 0.5, 0.8] {
            for &x in &[c(0.4, 0.0), c(1.7, 0.0), c(0.5, 0.9), c(-1.2, 0.3)] {
                let cap = FracSpec::new(alpha, 0.0, DerivKind::Caputo).unwrap();
                let rl = FracSpec::new(alpha, 0.0, DerivKind::RiemannLiouville).unwrap();
                let a = frac_derivative(&f, &cap, x).unwrap();
                let b = frac_derivative(&f, &rl, x).unwrap();
                assert!(close(a, b, 1e-12), "alpha={alpha}, x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn alpha_one_routes_to_classical_bitwise() {
        for name in ["f1", "f2", "f3", "f4"] {
            let f = builtin_model(name).unwrap();
            for kind in [DerivKind::Caputo, DerivKind::RiemannLiouville] {
                let spec = FracSpec::new(1.0, 0.0, kind).unwrap();
                for &x in &[c(0.9, 0.0), c(-1.1, 0.6), c(2.3, -0.4)] {
                    assert_eq!(
                        frac_derivative(&f, &spec, x).unwrap(),
                        classical_derivative(&f, x).unwrap(),
                        "{name} {kind} at {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn integer_order_two_matches_second_derivative() {
        // D^2 through the Gamma-ratio machinery must collapse to the
        // classical second derivative for a polynomial.
        let f = builtin_model("f1").unwrap();
        let d2 = FunctionModel::new(
            vec![
                PowerTerm::new(c(-385.2, 0.0), 4.0).unwrap(),
                PowerTerm::new(c(-512.0, 0.0), 3.0).unwrap(),
                PowerTerm::new(c(198.6, 0.0), 2.0).unwrap(),
                PowerTerm::new(c(-13.26, 0.0), 1.0).unwrap(),
                PowerTerm::new(c(53.42, 0.0), 0.0).unwrap(),
            ],
            vec![],
            0.0,
        )
        .unwrap();
        for kind in [DerivKind::Caputo, DerivKind::RiemannLiouville] {
            for &x in &[c(1.3, 0.4), c(-0.7, 0.0)] {
                let got = frac_derivative_nu(&f, kind, 2.0, x).unwrap();
                let want = eval(&d2, x);
                assert!(close(got, want, 1e-12), "{kind} at {x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn base_mismatch_is_rejected() {
        let f = builtin_model("f1").unwrap();
        let spec = FracSpec::new(0.5, 1.0, DerivKind::Caputo).unwrap();
        assert!(matches!(frac_derivative(&f, &spec, c(2.0, 0.0)), Err(Error::BaseMismatch { .. })));
        assert!(matches!(
            frac_derivative_quadrature(&f, &spec, 2.0),
            Err(Error::BaseMismatch { .. })
        ));
    }

    #[test]
    fn exp_terms_require_zero_base_for_closed_form() {
        let f =
            FunctionModel::new(vec![], vec![ExpTerm::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap()], 2.0)
                .unwrap();
        let spec = FracSpec::new(0.5, 2.0, DerivKind::Caputo).unwrap();
        assert!(matches!(frac_derivative(&f, &spec, c(3.0, 0.0)), Err(Error::ExpBase { .. })));
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let cases: [(&str, f64, DerivKind, f64); 4] = [
            ("f1", 0.5, DerivKind::Caputo, 1.5),
            ("f2", 0.75, DerivKind::RiemannLiouville, 2.0),
            ("f3", 0.25, DerivKind::Caputo, 0.7),
            ("f4", 0.95, DerivKind::RiemannLiouville, 1.2),
        ];
        for (name, alpha, kind, x) in cases {
            let f = builtin_model(name).unwrap();
            let spec = FracSpec::new(alpha, 0.0, kind).unwrap();
            let cf = frac_derivative(&f, &spec, c(x, 0.0)).unwrap();
            let quad = frac_derivative_quadrature(&f, &spec, x).unwrap();
            assert!(
                (cf - quad).norm() <= 1e-8 * (1.0 + cf.norm()),
                "{name} alpha={alpha} {kind} at {x}: closed {cf} vs quad {quad}"
            );
        }
    }

    #[test]
    fn quadrature_approaches_classical_as_alpha_tends_to_one() {
        let f = builtin_model("f1").unwrap();
        let spec = FracSpec::new(1.0 - 1e-6, 0.0, DerivKind::Caputo).unwrap();
        let quad = frac_derivative_quadrature(&f, &spec, 2.0).unwrap();
        let classical = classical_derivative(&f, c(2.0, 0.0)).unwrap();
        assert!(
            (quad - classical).norm() <= 1e-4 * (1.0 + classical.norm()),
            "quad {quad} vs classical {classical}"
        );
    }

    #[test]
    fn quadrature_requires_x_beyond_base() {
        let f = builtin_model("f1").unwrap();
        let spec = FracSpec::new(0.5, 0.0, DerivKind::Caputo).unwrap();
        assert!(matches!(frac_derivative_quadrature(&f, &spec, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(frac_derivative_quadrature(&f, &spec, -1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn recenter_preserves_values_and_round_trips() {
        let f = builtin_model("f1").unwrap();
        let g = recenter_powers(&f, 0.7).unwrap();
        assert_eq!(g.reference_point(), 0.7);
        for &x in &[c(0.0, 0.0), c(1.9, 0.0), c(-1.2, 0.8), c(0.7, 0.0)] {
            assert!(close(eval(&g, x), eval(&f, x), 1e-12));
        }
        let back = recenter_powers(&g, 0.0).unwrap();
        for (a, b) in back.power_terms().iter().zip(f.power_terms()) {
            assert!((a.coeff() - b.coeff()).norm() <= 1e-10 * (1.0 + b.coeff().norm()));
            assert_eq!(a.exponent(), b.exponent());
        }
    }

    #[test]
    fn recenter_rejects_fractional_exponents_and_nonzero_exp_base() {
        let f2 = builtin_model("f2").unwrap();
        assert!(matches!(
            recenter_powers(&f2, 1.0),
            Err(Error::NonIntegerExponent { exponent }) if exponent == 0.9 || exponent == 1.8
        ));
        let f4 = builtin_model("f4").unwrap();
        assert!(matches!(recenter_powers(&f4, 1.0), Err(Error::ExpBase { .. })));
        // Rebasing to 0 is a no-op for a model already centered there.
        let same = recenter_powers(&f4, 0.0).unwrap();
        assert_eq!(same, f4);
    }

    #[test]
    fn json_round_trip_is_exact() {
        for name in ["f1", "f2", "f3", "f4"] {
            let f = builtin_model(name).unwrap();
            let json = f.to_json_string();
            let back = FunctionModel::from_json_str(&json).unwrap();
            assert_eq!(back, f, "{name}");
        }
    }

    #[test]
    fn json_parser_rejects_bad_input() {
        assert!(FunctionModel::from_json_str("{\"power_terms\": [{\"re\": 1.0}]}").is_err());
        assert!(FunctionModel::from_json_str("{\"unknown\": 3}").is_err());
        assert!(FunctionModel::from_json_str("{\"power_terms\": [{\"re\": 1.0, \"p\": -2.0}]}")
            .is_err());
        // Missing sections default to empty / zero.
        let zero = FunctionModel::from_json_str("{}").unwrap();
        assert_eq!(zero.power_terms().len(), 0);
        assert_eq!(zero.reference_point(), 0.0);
    }

    #[test]
    fn deriv_kind_parsing_and_display() {
        assert_eq!("caputo".parse::<DerivKind>().unwrap(), DerivKind::Caputo);
        assert_eq!("RL".parse::<DerivKind>().unwrap(), DerivKind::RiemannLiouville);
        assert_eq!(DerivKind::RiemannLiouville.to_string(), "riemann-liouville");
        assert!("weyl".parse::<DerivKind>().is_err());
    }

    #[test]
    fn frac_spec_validates_alpha() {
        assert!(FracSpec::new(0.0, 0.0, DerivKind::Caputo).is_err());
        assert!(FracSpec::new(1.2, 0.0, DerivKind::Caputo).is_err());
        assert!(FracSpec::new(0.5, f64::NAN, DerivKind::Caputo).is_err());
        assert!(FracSpec::new(1.0, 0.0, DerivKind::Caputo).is_ok());
    }
}
