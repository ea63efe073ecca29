//! Single-point evaluation: method selection, dispatch and the JSON record.

use clap::ValueEnum;
use hlzeta::quad::{closed_kernel_applies, eval_phi_beta_integral_1d, eval_phi_closed_kernel, eval_phi_integral_m4};
use hlzeta::zeta::{classify_reduction, eval_phi_diagonal, eval_phi_double_series};
use hlzeta::{Complex64, EvalPoint, EvalResult, HlzError, Method, ParameterSet, QuadConfig, ReductionTag, SeriesConfig};
use serde::Serialize;

pub const SERIES_TOL: f64 = 1e-10;
pub const QUAD_TOL: f64 = 1e-10;
pub const MAX_DIAGONAL_ENV: &str = "HLZETA_MAX_DIAGONAL";

/// Methods selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Series,
    Diagonal,
    QuadM4,
    QuadBeta,
    ClosedKernel,
}

impl MethodChoice {
    pub fn parse(text: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(text.trim(), true).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for JsonComplex {
    fn from(c: Complex64) -> Self {
        JsonComplex { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRecord {
    pub value: JsonComplex,
    pub abs_err: f64,
    pub method: String,
    pub work: usize,
    pub converged: bool,
    pub reduction_tag: String,
}

impl EvalRecord {
    pub fn new(result: &EvalResult, tag: ReductionTag) -> Self {
        EvalRecord {
            value: result.value.into(),
            abs_err: result.abs_err,
            method: result.method.as_str().to_string(),
            work: result.work,
            converged: result.converged,
            reduction_tag: tag.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    /// The unconverged partial result, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial: Option<EvalRecord>,
}

impl ErrorInfo {
    pub fn new(err: &HlzError, tag: Option<ReductionTag>) -> Self {
        let partial = match (err, tag) {
            (HlzError::NoConvergence(r), Some(tag)) => Some(EvalRecord::new(r, tag)),
            _ => None,
        };
        ErrorInfo { kind: err.kind().to_string(), message: err.to_string(), partial }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        ErrorInfo { kind: "parse".to_string(), message: message.into(), partial: None }
    }
}

/// Process exit status for a failed evaluation.
pub fn exit_code(err: &HlzError) -> i32 {
    match err {
        HlzError::NoConvergence(_) | HlzError::QuadratureFailure { .. } => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Request {
    pub params: ParameterSet,
    pub point: EvalPoint,
    pub method: MethodChoice,
    pub tol: Option<f64>,
    pub max_diagonal: Option<usize>,
}

/// Reads the diagonal cap override from the environment.
pub fn max_diagonal_from_env() -> Result<Option<usize>, String> {
    match std::env::var(MAX_DIAGONAL_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| format!("{MAX_DIAGONAL_ENV} must be a positive integer, got {v:?}")),
    }
}

fn default_tol(method: Method) -> f64 {
    match method {
        Method::Series | Method::DoubleSeries | Method::Diagonal => SERIES_TOL,
        _ => QUAD_TOL,
    }
}

fn mellin_ok(pt: &EvalPoint) -> bool {
    pt.s.re > 0.0 && pt.a.re > 0.0
}

/// Preconditions of each concrete method, checked before it is chosen by `auto`.
pub fn preconditions(method: Method, p: &ParameterSet, pt: &EvalPoint) -> Result<(), String> {
    let ensure = |ok: bool, why: &str| if ok { Ok(()) } else { Err(why.to_string()) };
    match method {
        Method::ClosedKernel => {
            ensure(closed_kernel_applies(p), "needs μ = ν, δ = ξ, δ′ = ξ′")?;
            ensure(mellin_ok(pt), "needs Re(s) > 0 and Re(a) > 0")?;
            ensure(pt.z.norm() <= 1.0 && pt.t.norm() <= 1.0, "needs |z|, |t| ≤ 1")?;
            let one = Complex64::new(1.0, 0.0);
            let mut excess = pt.s;
            if pt.z == one {
                excess -= p.eta;
            }
            if pt.t == one {
                excess -= p.eta_p;
            }
            ensure(excess.re > 0.0, "kernel not integrable at x = 0")
        }
        Method::Diagonal => {
            ensure(pt.z != Complex64::new(0.0, 0.0), "needs z ≠ 0")?;
            ensure(pt.t.norm() <= pt.z.norm(), "needs |t| ≤ |z|")?;
            ensure(pt.is_interior(), "needs |z|, |t| < 1")
        }
        Method::QuadM4 => {
            ensure(mellin_ok(pt), "needs Re(s) > 0 and Re(a) > 0")?;
            ensure(pt.is_interior(), "needs |z|, |t| < 1")
        }
        Method::QuadBeta1D => {
            ensure(p.nu.re > p.mu.re && p.mu.re > 0.0, "needs Re(ν) > Re(μ) > 0")?;
            ensure(pt.is_interior(), "needs |z|, |t| < 1")
        }
        _ => Ok(()),
    }
}

/// The concrete method `auto` resolves to: the exact power law at `z = t = 0`,
/// the closed kernel when it applies, the explicit series when `|t| ≤ |z|`,
/// and otherwise the double series.
pub fn select_method(p: &ParameterSet, pt: &EvalPoint) -> Method {
    if classify_reduction(p, pt) == ReductionTag::PowerLaw {
        return Method::DoubleSeries;
    }
    for candidate in [Method::ClosedKernel, Method::Diagonal] {
        if preconditions(candidate, p, pt).is_ok() {
            return candidate;
        }
    }
    Method::DoubleSeries
}

fn concrete(choice: MethodChoice, p: &ParameterSet, pt: &EvalPoint) -> Method {
    match choice {
        MethodChoice::Auto => {
            let m = select_method(p, pt);
            if m != Method::DoubleSeries {
                assert!(preconditions(m, p, pt).is_ok(), "auto chose {m} outside its domain");
            }
            m
        }
        MethodChoice::Series => Method::DoubleSeries,
        MethodChoice::Diagonal => Method::Diagonal,
        MethodChoice::QuadM4 => Method::QuadM4,
        MethodChoice::QuadBeta => Method::QuadBeta1D,
        MethodChoice::ClosedKernel => Method::ClosedKernel,
    }
}

/// Evaluates one request; the reduction tag is returned alongside for reporting.
pub fn evaluate(req: &Request) -> (ReductionTag, Result<EvalResult, HlzError>) {
    let tag = classify_reduction(&req.params, &req.point);
    (tag, run(req))
}

fn run(req: &Request) -> Result<EvalResult, HlzError> {
    let (p, pt) = (&req.params, &req.point);
    let method = concrete(req.method, p, pt);
    let tol = req.tol.unwrap_or_else(|| default_tol(method));
    let mut scfg = SeriesConfig::with_tol(tol);
    if let Some(n) = req.max_diagonal {
        scfg.max_diagonal = n;
    }
    let qcfg = QuadConfig::with_tol(tol);
    let base = SeriesConfig { tol: SeriesConfig::default().tol, ..scfg };
    match method {
        Method::Diagonal => eval_phi_diagonal(p, pt, &scfg),
        Method::QuadM4 => eval_phi_integral_m4(p, pt, &qcfg, &base),
        Method::QuadBeta1D => eval_phi_beta_integral_1d(p, pt, &qcfg, &base),
        Method::ClosedKernel => {
            if !closed_kernel_applies(p) {
                return Err(HlzError::Domain("closed kernel needs μ = ν, δ = ξ, δ′ = ξ′".to_string()));
            }
            eval_phi_closed_kernel(p.eta, p.eta_p, pt, &qcfg)
        }
        _ => eval_phi_double_series(p, pt, &scfg),
    }
}
