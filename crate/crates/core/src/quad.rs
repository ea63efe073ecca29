//! Mellin-type integral representations of Φ.
//!
//! All of them rest on `(k+l+a)^{-s} = Γ(s)^{-1} ∫_0^∞ x^{s-1} e^{-(k+l+a)x} dx`
//! (`Re s > 0`, `Re a > 0`), which turns the double series into an integral of
//! a two-variable kernel evaluated at `(z e^{-x}, t e^{-x})`:
//!
//! * [`eval_phi_integral_m4`]: the full `M4` kernel;
//! * [`eval_phi_integral_humbert`]: Humbert `Φ1`, `Φ2`, `Φ3` kernels for the limiting forms;
//! * [`eval_phi_closed_kernel`]: `(1 - z e^{-x})^{-η} (1 - t e^{-x})^{-η′}` when `μ = ν`,
//!   `δ = ξ`, `δ′ = ξ′`;
//! * [`eval_phi_beta_integral_1d`], [`eval_phi_beta_integral_2d`]: the beta integral for
//!   `(μ)_{k+l}/(ν)_{k+l}`, alone or combined with the Mellin integral.
//!
//! The `x`-range is cut at [`QuadConfig::tail_cut_for`]; the semi-infinite beta
//! variable `y` is mapped to `(0, 1)` by `y = u/(1-u)`.

use num_complex::Complex64;

use crate::error::{HlzError, Result};
use crate::hypfun::{eval_humbert_phi1, eval_humbert_phi2, eval_humbert_phi3, eval_pfq, m4_series};
use crate::special::{complex_power_neg_s, log_gamma};
use crate::tanh_sinh::{self, Node};
use crate::types::{EvalPoint, EvalResult, Method, ParameterSet, QuadConfig, SeriesConfig};
use crate::zeta::{sum_weighted, uncoupled_series, LimitVariant};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Ratio between quadrature tolerance and the relative tolerance of kernel
/// series at the nodes.
pub const KERNEL_TOL_RATIO: f64 = 100.0;

/// Bound on `|kernel|` beyond the tail cut, where every kernel is `1 + O(e^{-x})`.
const TAIL_KERNEL_BOUND: f64 = 2.0;

/// Humbert kernels of the limiting forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HumbertKernel {
    /// `η′ → ∞` with `δ = ξ`, `δ′ = ξ′`: kernel `Φ1(μ, η; ν)`.
    Phi1 { mu: Complex64, eta: Complex64, nu: Complex64 },
    /// `μ → ∞` with `δ = ξ`, `δ′ = ξ′`: kernel `Φ2(η, η′; ν)`.
    Phi2 { eta: Complex64, eta_p: Complex64, nu: Complex64 },
    /// `μ, η′ → ∞` with `δ = ξ`, `δ′ = ξ′`: kernel `Φ3(η; ν)`.
    Phi3 { eta: Complex64, nu: Complex64 },
}

impl HumbertKernel {
    /// The equivalent parameter set and limiting form of the series. Parameters
    /// that drop out are set to one.
    pub fn limit_parameters(&self) -> (ParameterSet, LimitVariant) {
        let base = ParameterSet::real(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        match *self {
            HumbertKernel::Phi1 { mu, eta, nu } => {
                (ParameterSet { mu, eta, nu, ..base }, LimitVariant::EtaPrimeInf)
            }
            HumbertKernel::Phi2 { eta, eta_p, nu } => {
                (ParameterSet { eta, eta_p, nu, ..base }, LimitVariant::MuInf)
            }
            HumbertKernel::Phi3 { eta, nu } => (ParameterSet { eta, nu, ..base }, LimitVariant::MuAndEtaPrimeInf),
        }
    }

    fn eval(&self, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> Result<EvalResult> {
        match *self {
            HumbertKernel::Phi1 { mu, eta, nu } => eval_humbert_phi1(mu, eta, nu, x, y, cfg),
            HumbertKernel::Phi2 { eta, eta_p, nu } => eval_humbert_phi2(eta, eta_p, nu, x, y, cfg),
            HumbertKernel::Phi3 { eta, nu } => eval_humbert_phi3(eta, nu, x, y, cfg),
        }
    }
}

/// Whether `μ = ν`, `δ = ξ`, `δ′ = ξ′`, so that [`eval_phi_closed_kernel`] applies.
pub fn closed_kernel_applies(p: &ParameterSet) -> bool {
    p.mu == p.nu && p.delta == p.xi && p.delta_p == p.xi_p
}

fn require_mellin(pt: &EvalPoint) -> Result<()> {
    pt.validate()?;
    if !(pt.s.re > 0.0 && pt.a.re > 0.0) {
        return Err(HlzError::domain(format!(
            "integral representation needs Re(s) > 0 and Re(a) > 0, got s = {}, a = {}",
            pt.s, pt.a
        )));
    }
    Ok(())
}

fn kernel_cfg(qcfg: &QuadConfig, scfg: &SeriesConfig) -> SeriesConfig {
    SeriesConfig { tol: qcfg.tol / KERNEL_TOL_RATIO, ..*scfg }
}

/// `Γ(s)^{-1} ∫_0^X x^{s-1} e^{-ax} K(x) dx` with `X` from the configuration.
/// `kernel` returns the kernel value and the work spent on it.
fn mellin<K>(pt: &EvalPoint, qcfg: &QuadConfig, method: Method, mut kernel: K) -> Result<EvalResult>
where
    K: FnMut(f64) -> Result<(Complex64, usize)>,
{
    qcfg.validate()?;
    let (s, a) = (pt.s, pt.a);
    let ln_gamma_s = log_gamma(s)?;
    let abs_gamma_s = ln_gamma_s.re.exp();
    let cut = qcfg.tail_cut_for(s, a, TAIL_KERNEL_BOUND, abs_gamma_s);
    let mut work = 0usize;
    let quad = tanh_sinh::integrate(
        |node: Node| {
            let x = node.from_lo;
            let (k, w) = kernel(x)?;
            work += w;
            Ok(((s - 1.0) * x.ln() - a * x - ln_gamma_s).exp() * k)
        },
        0.0,
        cut,
        qcfg.tol,
        qcfg.max_levels,
    )?;
    let sigma = s.re;
    let tail = TAIL_KERNEL_BOUND * ((sigma - 1.0) * cut.ln() - a.re * cut).exp() / (abs_gamma_s * a.re);
    Ok(EvalResult {
        value: quad.value,
        abs_err: quad.abs_err + tail,
        work: work.max(quad.evals),
        method,
        converged: true,
    })
}

/// `Φ = Γ(s)^{-1} ∫_0^∞ x^{s-1} e^{-ax} M4(μ,η,η′,δ,δ′;ν,ξ,ξ′; z e^{-x}, t e^{-x}) dx`.
///
/// Needs `Re s > 0`, `Re a > 0` and `|z|, |t| < 1` unless the kernel series
/// terminates. Kernel series run at `qcfg.tol / 100` relative tolerance.
pub fn eval_phi_integral_m4(p: &ParameterSet, pt: &EvalPoint, qcfg: &QuadConfig, scfg: &SeriesConfig) -> Result<EvalResult> {
    p.validate()?;
    require_mellin(pt)?;
    scfg.validate()?;
    let series = m4_series(p, pt.z, pt.t);
    series.validate_denominators()?;
    if series.terminating_index().is_none() && !pt.is_interior() {
        return Err(HlzError::domain("M4 kernel integral needs |z| < 1 and |t| < 1"));
    }
    let kcfg = kernel_cfg(qcfg, scfg);
    mellin(pt, qcfg, Method::QuadM4, |x| {
        let e = (-x).exp();
        let series = m4_series(p, pt.z * e, pt.t * e);
        let r = series.sum(|_| ONE, &kcfg, Method::DoubleSeries)?;
        Ok((r.value, r.work))
    })
}

/// The limiting forms as integrals over Humbert kernels. `Φ1` needs `|z| < 1`;
/// `Φ2` and `Φ3` are entire.
pub fn eval_phi_integral_humbert(
    kernel: HumbertKernel,
    pt: &EvalPoint,
    qcfg: &QuadConfig,
    scfg: &SeriesConfig,
) -> Result<EvalResult> {
    let (p, _) = kernel.limit_parameters();
    p.validate()?;
    require_mellin(pt)?;
    scfg.validate()?;
    if let HumbertKernel::Phi1 { .. } = kernel {
        if pt.z.norm() >= 1.0 {
            return Err(HlzError::domain("Φ1 kernel integral needs |z| < 1"));
        }
    }
    let kcfg = kernel_cfg(qcfg, scfg);
    mellin(pt, qcfg, Method::QuadHumbert, |x| {
        let e = (-x).exp();
        let r = kernel.eval(pt.z * e, pt.t * e, &kcfg)?;
        Ok((r.value, r.work))
    })
}

/// `1 - w e^{-x}` without cancellation as `x → 0`.
fn one_minus_scaled(w: Complex64, x: f64) -> Complex64 {
    (ONE - w) - w * (-x).exp_m1()
}

/// `Φ` for `μ = ν`, `δ = ξ`, `δ′ = ξ′` through the kernel
/// `(1 - z e^{-x})^{-η} (1 - t e^{-x})^{-η′}`; no series is needed.
///
/// `|z|, |t| ≤ 1`. At `z = 1` the kernel behaves like `x^{-η}` and the integral
/// needs `Re(s - η) > 0`; likewise for `t = 1`.
pub fn eval_phi_closed_kernel(eta: Complex64, eta_p: Complex64, pt: &EvalPoint, qcfg: &QuadConfig) -> Result<EvalResult> {
    require_mellin(pt)?;
    if !eta.is_finite() || !eta_p.is_finite() {
        return Err(HlzError::invalid("η and η′ must be finite"));
    }
    if pt.z.norm() > 1.0 || pt.t.norm() > 1.0 {
        return Err(HlzError::domain("closed kernel integral needs |z| ≤ 1 and |t| ≤ 1"));
    }
    let mut excess = pt.s;
    if pt.z == ONE {
        excess -= eta;
    }
    if pt.t == ONE {
        excess -= eta_p;
    }
    if excess.re <= 0.0 {
        return Err(HlzError::domain(format!(
            "kernel singularity at x = 0 is not integrable: Re(s) minus the exponents at unit arguments is {}",
            excess.re
        )));
    }
    let factor = |w: Complex64, e: Complex64, x: f64| -> Result<Complex64> {
        if w == ZERO || e == ZERO {
            Ok(ONE)
        } else {
            complex_power_neg_s(one_minus_scaled(w, x), e)
        }
    };
    mellin(pt, qcfg, Method::ClosedKernel, |x| Ok((factor(pt.z, eta, x)? * factor(pt.t, eta_p, x)?, 1)))
}

/// `Γ(ν) / (Γ(μ) Γ(ν-μ))`, the beta normalization.
fn beta_norm(p: &ParameterSet) -> Result<Complex64> {
    if !(p.nu.re > p.mu.re && p.mu.re > 0.0) {
        return Err(HlzError::domain(format!(
            "beta integral needs Re(ν) > Re(μ) > 0, got μ = {}, ν = {}",
            p.mu, p.nu
        )));
    }
    Ok((log_gamma(p.nu)? - log_gamma(p.mu)? - log_gamma(p.nu - p.mu)?).exp())
}

/// `u^{μ-1} (1-u)^{ν-μ-1}` at a node of `(0, 1)`.
fn beta_weight(p: &ParameterSet, node: Node) -> Complex64 {
    ((p.mu - 1.0) * node.from_lo.ln() + (p.nu - p.mu - 1.0) * node.from_hi.ln()).exp()
}

/// `Φ = Γ(ν)/(Γ(μ)Γ(ν-μ)) ∫_0^1 u^{μ-1} (1-u)^{ν-μ-1} Φ̃(zu, tu, s, a) du`, where `Φ̃`
/// is the series without `(μ)_{k+l}/(ν)_{k+l}`. This is the integral over
/// `y ∈ (0, ∞)` with weight `y^{μ-1}(1+y)^{-ν}` after `y = u/(1-u)`.
///
/// Needs `Re ν > Re μ > 0`; `Φ̃` is summed at each node with relative tolerance
/// `qcfg.tol / 100`.
pub fn eval_phi_beta_integral_1d(
    p: &ParameterSet,
    pt: &EvalPoint,
    qcfg: &QuadConfig,
    scfg: &SeriesConfig,
) -> Result<EvalResult> {
    p.validate()?;
    pt.validate()?;
    qcfg.validate()?;
    scfg.validate()?;
    let norm = beta_norm(p)?;
    let kcfg = kernel_cfg(qcfg, scfg);
    let mut work = 0usize;
    let quad = tanh_sinh::integrate(
        |node: Node| {
            let u = node.from_lo.min(1.0 - node.from_hi);
            let series = uncoupled_series(p, pt.z * u, pt.t * u);
            let inner = sum_weighted(&series, pt, &kcfg, Method::DoubleSeries)?;
            work += inner.work;
            Ok(norm * beta_weight(p, node) * inner.value)
        },
        0.0,
        1.0,
        qcfg.tol,
        qcfg.max_levels,
    )?;
    Ok(EvalResult {
        value: quad.value,
        abs_err: quad.abs_err,
        work: work.max(quad.evals),
        method: Method::QuadBeta1D,
        converged: true,
    })
}

/// `2F1(η, δ; ξ; w)`, as the binomial `(1-w)^{-η}` when `δ = ξ`.
fn side_kernel(eta: Complex64, delta: Complex64, xi: Complex64, w: Complex64, cfg: &SeriesConfig) -> Result<(Complex64, usize)> {
    if w == ZERO || eta == ZERO {
        return Ok((ONE, 1));
    }
    if delta == xi {
        return Ok((complex_power_neg_s(ONE - w, eta)?, 1));
    }
    let r = eval_pfq(&[eta, delta], &[xi], w, cfg)?;
    Ok((r.value, r.work))
}

/// The double integral
///
/// ```text
///   Γ(ν)/(Γ(s)Γ(μ)Γ(ν-μ)) ∫_0^∞∫_0^∞ x^{s-1} e^{-ax} y^{μ-1} (1+y)^{-ν}
///       · 2F1(η, δ; ξ; w z) · 2F1(η′, δ′; ξ′; w t) dx dy,   w = y e^{-x}/(1+y)
/// ```
///
/// as nested tanh-sinh rules, the inner one over `x`. Each `2F1` collapses to a
/// binomial when its upper and lower parameters coincide. Needs
/// `Re ν > Re μ > 0`, `Re s > 0`, `Re a > 0` and `|z|, |t| < 1`. Expensive;
/// intended for accuracies around `1e-6`.
/// Near the endpoint singularities of the beta weight the scaled inner budget
/// would drop below what double precision resolves; the quadrature weights
/// there are tiny, so the floor costs nothing in the total.
const INNER_TOL_FLOOR: f64 = 1e-13;

pub fn eval_phi_beta_integral_2d(p: &ParameterSet, pt: &EvalPoint, qcfg: &QuadConfig) -> Result<EvalResult> {
    p.validate()?;
    require_mellin(pt)?;
    qcfg.validate()?;
    if !pt.is_interior() {
        return Err(HlzError::domain("beta double integral needs |z| < 1 and |t| < 1"));
    }
    let norm = beta_norm(p)?;
    let kcfg = SeriesConfig::with_tol(qcfg.tol / KERNEL_TOL_RATIO);
    // The inner integral is scaled by the outer weight, so give it the same
    // absolute budget relative to its own magnitude.
    let inner_cfg = QuadConfig { tol: qcfg.tol / 4.0, ..*qcfg };
    let mut work = 0usize;
    let quad = tanh_sinh::integrate(
        |node: Node| {
            let weight = norm * beta_weight(p, node);
            if weight == ZERO || !weight.is_finite() {
                return Ok(ZERO);
            }
            let u = node.from_lo.min(1.0 - node.from_hi);
            let scale = weight.norm().max(1.0);
            let cfg = QuadConfig { tol: (inner_cfg.tol / scale).max(INNER_TOL_FLOOR), ..inner_cfg };
            let inner = mellin(pt, &cfg, Method::QuadBeta2D, |x| {
                let w = u * (-x).exp();
                let (kx, wx) = side_kernel(p.eta, p.delta, p.xi, pt.z * w, &kcfg)?;
                let (ky, wy) = side_kernel(p.eta_p, p.delta_p, p.xi_p, pt.t * w, &kcfg)?;
                Ok((kx * ky, wx + wy))
            })?;
            work += inner.work;
            Ok(weight * inner.value)
        },
        0.0,
        1.0,
        qcfg.tol,
        qcfg.max_levels,
    )?;
    Ok(EvalResult {
        value: quad.value,
        abs_err: quad.abs_err,
        work: work.max(quad.evals),
        method: Method::QuadBeta2D,
        converged: true,
    })
}
