//! The identity suite behind `verify`: every integral, summation and reduction
//! identity evaluated two independent ways on a seeded parameter grid.

use clap::ValueEnum;
use hlzeta::hypfun::{eval_m4, m4_closed_form};
use hlzeta::quad::{
    eval_phi_beta_integral_1d, eval_phi_beta_integral_2d, eval_phi_closed_kernel, eval_phi_integral_humbert,
    eval_phi_integral_m4, HumbertKernel,
};
use hlzeta::zeta::{
    eval_phi_diagonal, eval_phi_diagonal_pfq, eval_phi_double_series, eval_phi_limit_case, summation_formula_lhs,
    InnerForm,
};
use hlzeta::{Complex64, EvalPoint, HlzError, LimitVariant, ParameterSet, QuadConfig, SeriesConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::eval::{ErrorInfo, JsonComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Small,
    Full,
}

impl Grid {
    /// Random points per identity family.
    fn points(self) -> usize {
        match self {
            Grid::Small => 2,
            Grid::Full => 8,
        }
    }
}

/// Size of the parameter in the limiting-form checks.
const LIMIT_PARAMETER: f64 = 1e6;
/// Relative tolerance of the limiting forms at that size; the error is
/// O(1/parameter).
const LIMIT_TOL: f64 = 1e-5;
/// Terms of the shifted-argument summation formula.
const SUMMATION_TERMS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    M4ClosedForm,
    M4Integral,
    HumbertPhi1,
    HumbertPhi2,
    HumbertPhi3,
    ClosedKernel,
    Beta1D,
    Beta2D,
    Summation,
    Diagonal,
    Reduction3F2,
    Reduction2F1,
    SwapSymmetry,
    LimitEtaP,
    LimitMu,
    LimitMuEtaP,
}

pub const ALL_IDENTITIES: [Identity; 16] = [
    Identity::M4ClosedForm,
    Identity::M4Integral,
    Identity::HumbertPhi1,
    Identity::HumbertPhi2,
    Identity::HumbertPhi3,
    Identity::ClosedKernel,
    Identity::Beta1D,
    Identity::Beta2D,
    Identity::Summation,
    Identity::Diagonal,
    Identity::Reduction3F2,
    Identity::Reduction2F1,
    Identity::SwapSymmetry,
    Identity::LimitEtaP,
    Identity::LimitMu,
    Identity::LimitMuEtaP,
];

impl Identity {
    pub fn id(self) -> &'static str {
        match self {
            Identity::M4ClosedForm => "m4-closed-form",
            Identity::M4Integral => "m4-integral-vs-series",
            Identity::HumbertPhi1 => "humbert-phi1-integral",
            Identity::HumbertPhi2 => "humbert-phi2-integral",
            Identity::HumbertPhi3 => "humbert-phi3-integral",
            Identity::ClosedKernel => "closed-kernel-integral",
            Identity::Beta1D => "beta-integral-1d",
            Identity::Beta2D => "beta-integral-2d",
            Identity::Summation => "shifted-argument-summation",
            Identity::Diagonal => "diagonal-vs-double-series",
            Identity::Reduction3F2 => "diagonal-3f2-inner",
            Identity::Reduction2F1 => "diagonal-2f1-inner",
            Identity::SwapSymmetry => "swap-symmetry",
            Identity::LimitEtaP => "limit-eta-p-infinite",
            Identity::LimitMu => "limit-mu-infinite",
            Identity::LimitMuEtaP => "limit-mu-eta-p-infinite",
        }
    }

    /// The formula each side of the identity instantiates.
    pub fn anchor(self) -> &'static str {
        match self {
            Identity::M4ClosedForm => "M4 series = (1-x)^(-eta) (1-y)^(-eta') when mu=nu, delta=xi, delta'=xi'",
            Identity::M4Integral => "Gamma(s)^-1 int x^(s-1) e^(-ax) M4(z e^-x, t e^-x) dx = double series",
            Identity::HumbertPhi1 => "Mellin integral with Humbert Phi1 kernel = eta' -> inf limit series",
            Identity::HumbertPhi2 => "Mellin integral with Humbert Phi2 kernel = mu -> inf limit series",
            Identity::HumbertPhi3 => "Mellin integral with Humbert Phi3 kernel = mu, eta' -> inf limit series",
            Identity::ClosedKernel => {
                "Gamma(s)^-1 int x^(s-1) e^(-ax) (1-z e^-x)^(-eta) (1-t e^-x)^(-eta') dx = double series"
            }
            Identity::Beta1D => "beta integral over y^(mu-1) (1+y)^(-nu) of the (mu,nu)-free series = double series",
            Identity::Beta2D => "beta x Mellin double integral with 2F1 kernels = double series",
            Identity::Summation => "sum_r (s)_r/r! Phi(z,t,s+r,a) x^r = Phi(z,t,s,a-x), |x|<|a|",
            Identity::Diagonal => "single-index series with terminating inner sum = double series",
            Identity::Reduction3F2 => "single-index series with 3F2 inner factor (delta=xi) = direct inner sum",
            Identity::Reduction2F1 => "single-index series with 2F1 inner factor (nu=eta, delta=xi, delta'=xi') = direct inner sum",
            Identity::SwapSymmetry => "Phi(params, z, t) = Phi(swapped params, t, z)",
            Identity::LimitEtaP => "eta' -> inf limit series = Phi(z, t/eta') at eta' = 1e6",
            Identity::LimitMu => "mu -> inf limit series = Phi(z/mu, t/mu) at mu = 1e6",
            Identity::LimitMuEtaP => "mu, eta' -> inf limit series = Phi(z/mu, t/(mu eta')) at mu = eta' = 1e6",
        }
    }

    /// Random points per family; the 2D quadrature is kept to a sample.
    fn points(self, grid: Grid) -> usize {
        match self {
            Identity::Beta2D => grid.points() / 2,
            _ => grid.points(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonParams {
    pub mu: JsonComplex,
    pub eta: JsonComplex,
    pub eta_p: JsonComplex,
    pub delta: JsonComplex,
    pub delta_p: JsonComplex,
    pub nu: JsonComplex,
    pub xi: JsonComplex,
    pub xi_p: JsonComplex,
}

impl From<&ParameterSet> for JsonParams {
    fn from(p: &ParameterSet) -> Self {
        JsonParams {
            mu: p.mu.into(),
            eta: p.eta.into(),
            eta_p: p.eta_p.into(),
            delta: p.delta.into(),
            delta_p: p.delta_p.into(),
            nu: p.nu.into(),
            xi: p.xi.into(),
            xi_p: p.xi_p.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonPoint {
    pub z: JsonComplex,
    pub t: JsonComplex,
    pub s: JsonComplex,
    pub a: JsonComplex,
}

impl From<&EvalPoint> for JsonPoint {
    fn from(pt: &EvalPoint) -> Self {
        JsonPoint { z: pt.z.into(), t: pt.t.into(), s: pt.s.into(), a: pt.a.into() }
    }
}

/// One verified instance. `pass` holds exactly when `abs_diff ≤ tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub anchor: &'static str,
    pub params: JsonParams,
    pub point: JsonPoint,
    /// Argument shift of the summation formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<JsonComplex>,
    pub lhs: Option<JsonComplex>,
    pub rhs: Option<JsonComplex>,
    pub abs_diff: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip)]
    pub non_convergence: bool,
}

#[derive(Debug, Clone, Copy)]
struct Case {
    identity: Identity,
    p: ParameterSet,
    pt: EvalPoint,
    shift: Option<Complex64>,
}

struct Sampler(ChaCha8Rng);

impl Sampler {
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    fn numerator(&mut self) -> Complex64 {
        Complex64::new(self.uniform(0.5, 3.0), 0.0)
    }

    fn denominator(&mut self) -> Complex64 {
        Complex64::new(self.uniform(1.0, 4.0), 0.0)
    }

    fn argument(&mut self) -> Complex64 {
        let m = self.uniform(0.1, 0.6);
        Complex64::new(if self.0.gen_bool(0.5) { m } else { -m }, 0.0)
    }

    fn params(&mut self) -> ParameterSet {
        ParameterSet {
            mu: self.numerator(),
            eta: self.numerator(),
            eta_p: self.numerator(),
            delta: self.numerator(),
            delta_p: self.numerator(),
            nu: self.denominator(),
            xi: self.denominator(),
            xi_p: self.denominator(),
        }
    }

    fn point(&mut self) -> EvalPoint {
        let (z, t) = (self.argument(), self.argument());
        EvalPoint { z, t, s: self.numerator(), a: self.numerator() }
    }

    /// Parameters and point adapted to what `identity` needs.
    fn case(&mut self, identity: Identity) -> Case {
        let mut p = self.params();
        let mut pt = self.point();
        let mut shift = None;
        match identity {
            Identity::M4ClosedForm | Identity::ClosedKernel => {
                p = ParameterSet { nu: p.mu, xi: p.delta, xi_p: p.delta_p, ..p };
            }
            Identity::HumbertPhi1 | Identity::HumbertPhi2 | Identity::HumbertPhi3 => {
                p = ParameterSet { xi: p.delta, xi_p: p.delta_p, ..p };
            }
            Identity::LimitEtaP | Identity::LimitMu | Identity::LimitMuEtaP => {}
            Identity::Beta1D | Identity::Beta2D => {
                // ν in [1, 4] above μ
                let mu = self.uniform(0.5, 2.5);
                p.mu = Complex64::new(mu, 0.0);
                p.nu = Complex64::new(self.uniform(mu + 0.5, mu + 1.5).min(4.0), 0.0);
            }
            Identity::Summation => {
                let fraction = self.uniform(0.1, 0.5);
                let sign = if self.0.gen_bool(0.5) { 1.0 } else { -1.0 };
                shift = Some(pt.a * (sign * fraction));
                // s = 1 is excluded by the formula
                if pt.s == Complex64::new(1.0, 0.0) {
                    pt.s += 0.5;
                }
            }
            Identity::Diagonal | Identity::SwapSymmetry => {}
            Identity::Reduction3F2 => p.xi = p.delta,
            Identity::Reduction2F1 => {
                p = ParameterSet { nu: p.eta, xi: p.delta, xi_p: p.delta_p, ..p };
            }
            Identity::M4Integral => {}
        }
        Case { identity, p, pt, shift }
    }
}

/// Fixed instances every run carries in addition to the random ones.
fn anchored_cases() -> Vec<Case> {
    let one = Complex64::new(1.0, 0.0);
    let p = ParameterSet::real(1.7, 1.0, 2.0, 2.3, 0.6, 1.7, 2.3, 0.6);
    let generic = ParameterSet::real(2.0, 1.5, 0.5, 1.2, 0.8, 3.0, 2.2, 1.7);
    let pt = EvalPoint::real(0.4, 0.3, 2.0, 1.5);
    vec![
        Case { identity: Identity::M4ClosedForm, p, pt: EvalPoint::real(0.5, 0.25, 0.0, 1.0), shift: None },
        Case {
            identity: Identity::ClosedKernel,
            p: ParameterSet { eta: one, eta_p: one, ..p },
            pt: EvalPoint::real(0.5, 0.0, 1.0, 1.0),
            shift: None,
        },
        Case { identity: Identity::Summation, p: generic, pt, shift: Some(Complex64::new(0.0, 0.0)) },
        Case { identity: Identity::Summation, p: generic, pt, shift: Some(Complex64::new(0.3, 0.0)) },
        Case { identity: Identity::Diagonal, p: generic, pt, shift: None },
    ]
}

/// All cases of the suite, in report order: the anchored instances of each
/// family first, then its random points.
fn cases(grid: Grid, seed: u64) -> Vec<Case> {
    let mut sampler = Sampler(ChaCha8Rng::seed_from_u64(seed));
    let anchored = anchored_cases();
    let mut out = Vec::new();
    for identity in ALL_IDENTITIES {
        out.extend(anchored.iter().filter(|c| c.identity == identity));
        for _ in 0..identity.points(grid) {
            out.push(sampler.case(identity));
        }
    }
    out
}

fn series_cfg() -> SeriesConfig {
    SeriesConfig::with_tol(1e-15)
}

fn series(p: &ParameterSet, pt: &EvalPoint) -> Result<Complex64, HlzError> {
    Ok(eval_phi_double_series(p, pt, &series_cfg())?.value)
}

fn relative(scale: f64, rhs: Complex64) -> f64 {
    scale * rhs.norm().max(1.0)
}

/// `(lhs, rhs, tolerance)` of one case.
fn evaluate(case: &Case) -> Result<(Complex64, Complex64, f64), HlzError> {
    let (p, pt) = (&case.p, &case.pt);
    let quad = |tol: f64| QuadConfig::with_tol(tol);
    let scfg = SeriesConfig::default();
    Ok(match case.identity {
        Identity::M4ClosedForm => {
            let closed = m4_closed_form(p.eta, p.eta_p, pt.z, pt.t)?;
            (eval_m4(p, pt.z, pt.t, &series_cfg())?.value, closed, relative(1e-11, closed))
        }
        Identity::M4Integral => (eval_phi_integral_m4(p, pt, &quad(1e-10), &scfg)?.value, series(p, pt)?, 1e-8),
        Identity::HumbertPhi1 | Identity::HumbertPhi2 | Identity::HumbertPhi3 => {
            let kernel = match case.identity {
                Identity::HumbertPhi1 => HumbertKernel::Phi1 { mu: p.mu, eta: p.eta, nu: p.nu },
                Identity::HumbertPhi2 => HumbertKernel::Phi2 { eta: p.eta, eta_p: p.eta_p, nu: p.nu },
                _ => HumbertKernel::Phi3 { eta: p.eta, nu: p.nu },
            };
            let (q, variant) = kernel.limit_parameters();
            let rhs = eval_phi_limit_case(&q, variant, pt, &series_cfg())?.value;
            (eval_phi_integral_humbert(kernel, pt, &quad(1e-10), &scfg)?.value, rhs, 1e-8)
        }
        Identity::ClosedKernel => {
            (eval_phi_closed_kernel(p.eta, p.eta_p, pt, &quad(1e-11))?.value, series(p, pt)?, 1e-9)
        }
        Identity::Beta1D => (eval_phi_beta_integral_1d(p, pt, &quad(1e-9), &scfg)?.value, series(p, pt)?, 1e-7),
        Identity::Beta2D => (eval_phi_beta_integral_2d(p, pt, &quad(1e-8))?.value, series(p, pt)?, 1e-6),
        Identity::Summation => {
            let x = case.shift.unwrap_or_default();
            let lhs = summation_formula_lhs(p, pt, x, SUMMATION_TERMS, &series_cfg())?.value;
            (lhs, series(p, &pt.with_a(pt.a - x))?, 1e-8)
        }
        Identity::Diagonal => {
            let rhs = series(p, pt)?;
            (eval_phi_diagonal(p, pt, &series_cfg())?.value, rhs, 1e-10 * (1.0 + rhs.norm()))
        }
        Identity::Reduction3F2 | Identity::Reduction2F1 => {
            let form = if case.identity == Identity::Reduction3F2 {
                InnerForm::DeltaEqXi
            } else {
                InnerForm::NuEqEtaDeltaEqXi
            };
            let rhs = eval_phi_diagonal(p, pt, &series_cfg())?.value;
            (eval_phi_diagonal_pfq(p, pt, form, &series_cfg())?.value, rhs, relative(1e-10, rhs))
        }
        Identity::SwapSymmetry => {
            let rhs = series(&p.swapped(), &pt.swapped())?;
            (series(p, pt)?, rhs, relative(1e-12, rhs))
        }
        Identity::LimitEtaP | Identity::LimitMu | Identity::LimitMuEtaP => {
            let big = Complex64::new(LIMIT_PARAMETER, 0.0);
            let (variant, q, z, t) = match case.identity {
                Identity::LimitEtaP => (LimitVariant::EtaPrimeInf, ParameterSet { eta_p: big, ..*p }, pt.z, pt.t / big),
                Identity::LimitMu => (LimitVariant::MuInf, ParameterSet { mu: big, ..*p }, pt.z / big, pt.t / big),
                _ => (
                    LimitVariant::MuAndEtaPrimeInf,
                    ParameterSet { mu: big, eta_p: big, ..*p },
                    pt.z / big,
                    pt.t / (big * big),
                ),
            };
            let lhs = eval_phi_limit_case(p, variant, pt, &series_cfg())?.value;
            let rhs = series(&q, &EvalPoint { z, t, ..*pt })?;
            (lhs, rhs, relative(LIMIT_TOL, rhs))
        }
    })
}

fn report(case: &Case, tol_override: Option<f64>) -> IdentityReport {
    let outcome = evaluate(case);
    let mut r = IdentityReport {
        identity: case.identity.id(),
        anchor: case.identity.anchor(),
        params: (&case.p).into(),
        point: (&case.pt).into(),
        shift: case.shift.map(Into::into),
        lhs: None,
        rhs: None,
        abs_diff: None,
        tolerance: 0.0,
        pass: false,
        error: None,
        non_convergence: false,
    };
    match outcome {
        Ok((lhs, rhs, tol)) => {
            let diff = (lhs - rhs).norm();
            let tol = tol_override.unwrap_or(tol);
            r.lhs = Some(lhs.into());
            r.rhs = Some(rhs.into());
            r.abs_diff = Some(diff);
            r.tolerance = tol;
            r.pass = diff <= tol;
        }
        Err(e) => {
            r.tolerance = tol_override.unwrap_or(0.0);
            r.non_convergence = matches!(e, HlzError::NoConvergence(_) | HlzError::QuadratureFailure { .. });
            r.error = Some(ErrorInfo::new(&e, None));
        }
    }
    r
}

/// Runs the whole suite on the current rayon pool; the report order depends
/// only on `grid` and `seed`.
pub fn run_verify(grid: Grid, seed: u64, tol_override: Option<f64>) -> Vec<IdentityReport> {
    cases(grid, seed).par_iter().map(|c| report(c, tol_override)).collect()
}

/// Exit status of a finished suite: 3 if anything failed to converge, 1 if any
/// identity failed, 0 otherwise.
pub fn exit_status(reports: &[IdentityReport]) -> i32 {
    if reports.iter().any(|r| r.non_convergence) {
        3
    } else if reports.iter().any(|r| !r.pass) {
        1
    } else {
        0
    }
}
