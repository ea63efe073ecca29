//! The two-variable extended Hurwitz-Lerch zeta function
//!
//! ```text
//!   Φ_{μ,η,η′,δ,δ′;ν,ξ,ξ′}(z,t,s,a) =
//!     Σ_{k,l} (μ)_{k+l}(η)_k(η′)_l(δ)_k(δ′)_l / ((ν)_{k+l}(ξ)_k(ξ′)_l k! l!) · z^k t^l / (k+l+a)^s
//! ```
//!
//! evaluated by shell summation of the double series, by the explicit
//! single-index series with a terminating inner sum, and through its limiting
//! forms. Quadrature representations live in [`crate::quad`].
//!
//! Domain: `|z| < 1` and `|t| < 1`. On the unit circle only the points `z = 1,
//! t = 0` and `z = 0, t = 1` are accepted, where the series collapses to a single
//! index whose slowly decaying tail is summed by Euler-Maclaurin.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HlzError, Result};
use crate::hypfun::eval_pfq;
use crate::series::{ConvergenceTracker, DoubleSeries, Factors, RESYNC_PERIOD};
use crate::special::{complex_div, complex_power_neg_s, log_gamma, nonpositive_integer_order, pochhammer_ratio};
use crate::tanh_sinh;
use crate::types::{EvalPoint, EvalResult, Method, ParameterSet, SeriesConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Required excess of the boundary convergence exponent.
pub const BOUNDARY_MARGIN: f64 = 0.5;

/// Which parameters have been sent to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitVariant {
    Full,
    /// `η′ → ∞` with `t` scaled by `1/η′`: the `(η′)_l` factor drops out.
    EtaPrimeInf,
    /// `μ → ∞` with `z, t` scaled by `1/μ`: the `(μ)_{k+l}` factor drops out.
    MuInf,
    /// Both of the above.
    MuAndEtaPrimeInf,
}

/// Most specific known function the parameters collapse to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionTag {
    General,
    /// `δ = ξ`, `δ′ = ξ′`: the three-parameter two-variable function with `(μ)_{k+l}/(ν)_{k+l}`.
    ThreeParameter,
    /// Additionally `μ = ν`: `Σ (η)_k (η′)_l z^k t^l / (k! l! (k+l+a)^s)`.
    TwoParameter,
    /// The one-variable `Φ(z, s, a) = Σ z^k/(k+a)^s`.
    ClassicalPhi,
    /// `z = t = 0`: the value is `a^{-s}`.
    PowerLaw,
}

impl ReductionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReductionTag::General => "general",
            ReductionTag::ThreeParameter => "three-parameter",
            ReductionTag::TwoParameter => "two-parameter",
            ReductionTag::ClassicalPhi => "classical-phi",
            ReductionTag::PowerLaw => "power-law",
        }
    }
}

/// Exact-equality classification; no tolerance is applied.
pub fn classify_reduction(p: &ParameterSet, pt: &EvalPoint) -> ReductionTag {
    if pt.z == ZERO && pt.t == ZERO {
        return ReductionTag::PowerLaw;
    }
    if p.delta != p.xi || p.delta_p != p.xi_p {
        return ReductionTag::General;
    }
    if p.mu != p.nu {
        return ReductionTag::ThreeParameter;
    }
    let z_only = pt.t == ZERO && p.eta == ONE;
    let t_only = pt.z == ZERO && p.eta_p == ONE;
    if z_only || t_only {
        ReductionTag::ClassicalPhi
    } else {
        ReductionTag::TwoParameter
    }
}

/// The double series of the given variant at `(z, t)`, without the `(n+a)^{-s}` weight.
pub(crate) fn zeta_series(p: &ParameterSet, variant: LimitVariant, z: Complex64, t: Complex64) -> DoubleSeries {
    let keep_mu = matches!(variant, LimitVariant::Full | LimitVariant::EtaPrimeInf);
    let keep_eta_p = matches!(variant, LimitVariant::Full | LimitVariant::MuInf);
    let coupled = if keep_mu { Factors::new(&[p.mu], &[p.nu]) } else { Factors::new(&[], &[p.nu]) };
    let y_side = if keep_eta_p {
        Factors::new(&[p.eta_p, p.delta_p], &[p.xi_p])
    } else {
        Factors::new(&[p.delta_p], &[p.xi_p])
    };
    DoubleSeries {
        coupled,
        x_side: Factors::new(&[p.eta, p.delta], &[p.xi]),
        y_side,
        x: z,
        y: t,
    }
}

/// The series with the `(μ)_{k+l}/(ν)_{k+l}` coupling removed.
pub(crate) fn uncoupled_series(p: &ParameterSet, z: Complex64, t: Complex64) -> DoubleSeries {
    DoubleSeries {
        coupled: Factors::default(),
        x_side: Factors::new(&[p.eta, p.delta], &[p.xi]),
        y_side: Factors::new(&[p.eta_p, p.delta_p], &[p.xi_p]),
        x: z,
        y: t,
    }
}

pub(crate) fn shell_weight(pt: &EvalPoint) -> impl Fn(usize) -> Complex64 {
    let (a, s) = (pt.a, pt.s);
    move |n| complex_power_neg_s(a + n as f64, s).expect("n + a is never zero for admissible a")
}

/// Where a point sits relative to the convergence region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Interior,
    /// `z = 1, t = 0` (or the mirror image when `swapped`).
    Edge { swapped: bool },
}

fn classify_region(series: &DoubleSeries, pt: &EvalPoint) -> Result<Region> {
    if series.terminating_index().is_some() || pt.is_interior() {
        return Ok(Region::Interior);
    }
    let (zn, tn) = (pt.z.norm(), pt.t.norm());
    if zn > 1.0 || tn > 1.0 {
        return Err(HlzError::domain(format!("|z| = {zn}, |t| = {tn}: outside the closed unit bidisc")));
    }
    if pt.z == ONE && pt.t == ZERO {
        Ok(Region::Edge { swapped: false })
    } else if pt.t == ONE && pt.z == ZERO {
        Ok(Region::Edge { swapped: true })
    } else {
        Err(HlzError::domain(
            "on the unit circle only z = 1, t = 0 and z = 0, t = 1 are supported",
        ))
    }
}

/// Sums `series · (n+a)^{-s}` over its whole domain, interior or edge.
pub(crate) fn sum_weighted(series: &DoubleSeries, pt: &EvalPoint, cfg: &SeriesConfig, method: Method) -> Result<EvalResult> {
    cfg.validate()?;
    match classify_region(series, pt)? {
        Region::Interior => series.sum(shell_weight(pt), cfg, method),
        Region::Edge { swapped } => {
            let one_var = if swapped {
                DoubleSeries {
                    coupled: series.coupled.clone(),
                    x_side: series.y_side.clone(),
                    y_side: Factors::default(),
                    x: ONE,
                    y: ZERO,
                }
            } else {
                DoubleSeries { y_side: Factors::default(), y: ZERO, ..series.clone() }
            };
            edge_sum(&one_var, pt, cfg, method)
        }
    }
}

/// `lnΓ(x + c) - lnΓ(x)` for real `x > 0`, asymptotic for large `x`.
fn ln_gamma_shift(c: Complex64, x: f64) -> Complex64 {
    if x > 1e3 * (1.0 + c.norm()).powi(2) {
        let c2 = c * c;
        let b2 = c2 - c;
        let b3 = c2 * c - c2 * 1.5 + c * 0.5;
        let b4 = c2 * c2 - c2 * c * 2.0 + c2;
        let inv = 1.0 / x;
        c * x.ln() + b2 * (0.5 * inv) - b3 * (inv * inv / 6.0) + b4 * (inv * inv * inv / 12.0)
    } else {
        let lg = |w: Complex64| log_gamma(w).expect("no poles on the tail range");
        lg(c + x) - lg(Complex64::new(x, 0.0))
    }
}

/// Continuous extension of a one-variable term at argument 1:
/// `∏Γ(num+x)/Γ(num) / ∏Γ(den+x)/Γ(den) / Γ(x+1) · (x+a)^{-s}`.
struct ContinuousTerm {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    /// `#num - #den - 1`: multiplicity of the uncancelled `lnΓ(x)`.
    net: i64,
    offset: Complex64,
    s: Complex64,
    a: Complex64,
}

impl ContinuousTerm {
    fn new(series: &DoubleSeries, pt: &EvalPoint) -> Result<Self> {
        let num: Vec<_> = series.coupled.num.iter().chain(&series.x_side.num).copied().collect();
        let den: Vec<_> = series.coupled.den.iter().chain(&series.x_side.den).copied().collect();
        let mut offset = ZERO;
        for &c in &num {
            offset -= log_gamma(c)?;
        }
        for &d in &den {
            offset += log_gamma(d)?;
        }
        let net = num.len() as i64 - den.len() as i64 - 1;
        Ok(ContinuousTerm { num, den, net, offset, s: pt.s, a: pt.a })
    }

    fn eval(&self, x: f64) -> Complex64 {
        let mut log = self.offset - ln_gamma_shift(ONE, x);
        for &c in &self.num {
            log += ln_gamma_shift(c, x);
        }
        for &d in &self.den {
            log -= ln_gamma_shift(d, x);
        }
        if self.net != 0 {
            log += log_gamma(Complex64::new(x, 0.0)).expect("x > 0") * self.net as f64;
        }
        let power = complex_power_neg_s(self.a + x, self.s).expect("x + a is nonzero on the tail");
        log.exp() * power
    }
}

/// One-variable series at argument exactly 1: head summed directly, tail by
/// Euler-Maclaurin on the continuous extension of the term.
fn edge_sum(series: &DoubleSeries, pt: &EvalPoint, cfg: &SeriesConfig, method: Method) -> Result<EvalResult> {
    let n_num = series.coupled.num.len() + series.x_side.num.len();
    let n_den = series.coupled.den.len() + series.x_side.den.len();
    if n_num < n_den + 1 {
        // Faster than geometric decay; nothing special happens at argument 1.
        return series.sum(shell_weight(pt), cfg, method);
    }
    let sum_num: Complex64 = series.coupled.num.iter().chain(&series.x_side.num).sum();
    let sum_den: Complex64 = series.coupled.den.iter().chain(&series.x_side.den).sum();
    let margin = (pt.s + sum_den - sum_num).re;
    if n_num > n_den + 1 || margin <= BOUNDARY_MARGIN {
        return Err(HlzError::domain(format!(
            "boundary series needs Re(s + Σden − Σnum) > {BOUNDARY_MARGIN}, got {margin}"
        )));
    }
    let term = ContinuousTerm::new(series, pt)?;
    let decay = (sum_num - sum_den - pt.s).norm() + 4.0;

    let mut n = 256usize.min(cfg.max_diagonal.max(8));
    loop {
        let nf = n as f64;
        let head = series.sum_shells(shell_weight(pt), n);
        let f = |x: f64| term.eval(x);
        let (fm3, fm1, f0, fp1, fp3) = (f(nf - 1.5), f(nf - 0.5), f(nf), f(nf + 0.5), f(nf + 1.5));
        let third = fp3 - fp1 * 3.0 + fm1 * 3.0 - fm3;
        let first = (fp1 - fm1) - third / 24.0;
        let remainder = third.norm() * decay * decay / (30240.0 * nf * nf);
        let scale = head.value.norm().max(1.0);

        if remainder <= 0.1 * cfg.tol * scale || n >= cfg.max_diagonal {
            let quad_tol = (0.01 * cfg.tol * scale).max(1e-300);
            let integral = tanh_sinh::integrate(
                |node| {
                    // x = N/u, dx = N/u² du; the integrand underflows to zero long
                    // before x overflows.
                    let u = node.from_lo;
                    let x = nf / u;
                    if !x.is_finite() {
                        return Ok(ZERO);
                    }
                    let fx = f(x) * x;
                    Ok(if fx == ZERO { ZERO } else { fx / u })
                },
                0.0,
                1.0,
                quad_tol,
                12,
            );
            let (integral, q_err, q_evals) = match integral {
                Ok(q) => (q.value, q.abs_err, q.evals),
                Err(HlzError::QuadratureFailure { estimate, .. }) => (ZERO, estimate, 0),
                Err(e) => return Err(e),
            };
            let tail = integral + f0 * 0.5 - first / 12.0 + third / 720.0;
            let value = head.value + tail;
            let abs_err = remainder + q_err + 4.0 * f64::EPSILON * (head.abs_sum + tail.norm());
            let converged = remainder <= 0.1 * cfg.tol * scale && q_err <= quad_tol.max(1e-15 * tail.norm());
            let result = EvalResult { value, abs_err, work: head.work + q_evals + 5, method, converged };
            return if converged { Ok(result) } else { Err(HlzError::NoConvergence(Box::new(result))) };
        }
        n = (n * 4).min(cfg.max_diagonal);
    }
}

/// The double series summed along shells `n = k + l`.
pub fn eval_phi_double_series(p: &ParameterSet, pt: &EvalPoint, cfg: &SeriesConfig) -> Result<EvalResult> {
    p.validate()?;
    pt.validate()?;
    let series = zeta_series(p, LimitVariant::Full, pt.z, pt.t);
    sum_weighted(&series, pt, cfg, Method::DoubleSeries)
}

/// The one-variable `Φ(z, s, a) = Σ_k z^k / (k+a)^s`, for `|z| < 1` or `z = 1`
/// with `Re s > 1.5`.
pub fn eval_classical_phi(z: Complex64, s: Complex64, a: Complex64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let pt = EvalPoint::new(z, ZERO, s, a)?;
    let series = DoubleSeries {
        coupled: Factors::default(),
        x_side: Factors::new(&[ONE], &[]),
        y_side: Factors::default(),
        x: z,
        y: ZERO,
    };
    sum_weighted(&series, &pt, cfg, Method::Series)
}

/// Limiting forms with `(η′)_l`, `(μ)_{k+l}`, or both removed. Removed
/// parameters are ignored.
pub fn eval_phi_limit_case(
    p: &ParameterSet,
    variant: LimitVariant,
    pt: &EvalPoint,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    p.validate()?;
    pt.validate()?;
    let series = zeta_series(p, variant, pt.z, pt.t);
    sum_weighted(&series, pt, cfg, Method::DoubleSeries)
}

/// Explicit single-index form
///
/// ```text
///   Σ_k (μ)_k / (ν)_k · z^k / (a+k)^s · Σ_{l=0}^{k} α_{k-l} β_l (t/z)^l
///   α_j = (η)_j (δ)_j / ((ξ)_j j!),   β_l = (η′)_l (δ′)_l / ((ξ′)_l l!)
/// ```
///
/// The inner sum is the finite Cauchy product, evaluated by Horner's rule in
/// `t/z`; it equals `α_k` times the terminating `4F3` whenever that form is
/// pole-free (see [`diagonal_inner_4f3`]). Requires `z ≠ 0`; accuracy degrades
/// when `|t/z|` is large.
pub fn eval_phi_diagonal(p: &ParameterSet, pt: &EvalPoint, cfg: &SeriesConfig) -> Result<EvalResult> {
    p.validate()?;
    pt.validate()?;
    cfg.validate()?;
    if pt.z == ZERO {
        return Err(HlzError::domain("explicit series representation needs z ≠ 0"));
    }
    let series = zeta_series(p, LimitVariant::Full, pt.z, pt.t);
    series.validate_denominators()?;
    if let Region::Edge { .. } = classify_region(&series, pt)? {
        // t = 0 here, so only l = 0 survives and the form is the one-variable series.
        return sum_weighted(&series, pt, cfg, Method::Diagonal);
    }

    let terminating = series.terminating_index();
    let max_k = terminating.map_or(cfg.max_diagonal, |m| m.min(cfg.max_diagonal));
    let ratio = complex_div(pt.t, pt.z);
    let alpha_f = Factors::new(&[p.eta, p.delta], &[p.xi, ONE]);
    let beta_f = Factors::new(&[p.eta_p, p.delta_p], &[p.xi_p, ONE]);
    let mut alpha = vec![ONE];
    let mut beta = vec![ONE];
    let mut outer = ONE;
    let mut z_pow = ONE;
    let mut tracker = ConvergenceTracker::new(cfg);

    for k in 0..=max_k {
        if k > 0 {
            let j = (k - 1) as f64;
            alpha.push(alpha[k - 1] * (p.eta + j) * (p.delta + j) / ((p.xi + j) * k as f64));
            beta.push(beta[k - 1] * (p.eta_p + j) * (p.delta_p + j) / ((p.xi_p + j) * k as f64));
            if k % RESYNC_PERIOD == 0 {
                outer = pochhammer_ratio(&[p.mu], &[p.nu], k);
                z_pow = pt.z.powu(k as u32);
                alpha[k] = resync(&alpha_f, k).unwrap_or(alpha[k]);
                beta[k] = resync(&beta_f, k).unwrap_or(beta[k]);
            } else {
                outer *= (p.mu + j) / (p.nu + j);
                z_pow *= pt.z;
            }
        }
        let mut inner = ZERO;
        for l in (0..=k).rev() {
            inner = inner * ratio + alpha[k - l] * beta[l];
        }
        let weight = complex_power_neg_s(pt.a + k as f64, pt.s)?;
        let contribution = if inner == ZERO || outer == ZERO { ZERO } else { outer * z_pow * weight * inner };
        tracker.push(contribution, k + 1);
        if terminating.is_none() && tracker.converged {
            break;
        }
    }
    if terminating.is_some_and(|m| m <= cfg.max_diagonal) {
        tracker.converged = true;
        tracker.exact = true;
    }
    tracker.finish(Method::Diagonal)
}

/// `∏(num)_k / ∏(den)_k` from scratch, skipped when an integer parameter could
/// make the ratio singular or exactly zero.
fn resync(f: &Factors, k: usize) -> Option<Complex64> {
    let integer = f.num.iter().chain(&f.den).any(|&c| nonpositive_integer_order(c).is_some());
    (!integer).then(|| pochhammer_ratio(&f.num, &f.den, k))
}

/// The normalized inner sum `Σ_{l≤k} α_{k-l} β_l r^l / α_k` as the terminating
/// `4F3(η′, δ′, 1-ξ-k, -k; 1-η-k, 1-δ-k, ξ′; r)`.
///
/// Returns `None` when a lower parameter `1-η-k` or `1-δ-k` vanishes inside the
/// summation range, where the `4F3` form has a removable singularity that the
/// direct sum does not.
pub fn diagonal_inner_4f3(p: &ParameterSet, k: usize, ratio: Complex64) -> Option<Result<Complex64>> {
    let kf = k as f64;
    let lower = [ONE - p.eta - kf, ONE - p.delta - kf, p.xi_p];
    let hits = |d: Complex64| nonpositive_integer_order(d).is_some_and(|m| m < k);
    if lower.iter().any(|&d| hits(d)) {
        return None;
    }
    let upper = [p.eta_p, p.delta_p, ONE - p.xi - kf, Complex64::new(-kf, 0.0)];
    Some(eval_pfq(&upper, &lower, ratio, &SeriesConfig::with_tol(1e-16)).map(|r| r.value))
}

/// The normalized inner sum `Σ_{l≤k} α_{k-l} β_l r^l / α_k` computed directly.
/// `α_k` must be nonzero.
pub fn diagonal_inner_direct(p: &ParameterSet, k: usize, ratio: Complex64) -> Complex64 {
    let alpha_f = Factors::new(&[p.eta, p.delta], &[p.xi, ONE]);
    let beta_f = Factors::new(&[p.eta_p, p.delta_p], &[p.xi_p, ONE]);
    let alpha = |j: usize| pochhammer_ratio(&alpha_f.num, &alpha_f.den, j);
    let beta = |l: usize| pochhammer_ratio(&beta_f.num, &beta_f.den, l);
    let mut inner = ZERO;
    for l in (0..=k).rev() {
        inner = inner * ratio + alpha(k - l) * beta(l);
    }
    inner / alpha(k)
}

/// Which hypergeometric inner factor to use in [`eval_phi_diagonal_pfq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerForm {
    /// `4F3(η′, δ′, 1-ξ-k, -k; 1-η-k, 1-δ-k, ξ′; t/z)`, all parameters free.
    General,
    /// `δ = ξ`: `3F2(η′, δ′, -k; ξ′, 1-η-k; t/z)` after the `1-ξ-k` pair cancels.
    DeltaEqXi,
    /// `ν = η`, `δ = ξ`, `δ′ = ξ′`: `2F1(η′, -k; 1-η-k; t/z)`.
    NuEqEtaDeltaEqXi,
}

/// The explicit series with its inner sum instantiated as a terminating
/// hypergeometric polynomial. Cross-check for [`eval_phi_diagonal`]; fails with a
/// domain error where the polynomial's lower parameters hit a pole.
pub fn eval_phi_diagonal_pfq(p: &ParameterSet, pt: &EvalPoint, form: InnerForm, cfg: &SeriesConfig) -> Result<EvalResult> {
    p.validate()?;
    pt.validate()?;
    cfg.validate()?;
    if pt.z == ZERO {
        return Err(HlzError::domain("explicit series representation needs z ≠ 0"));
    }
    if !pt.is_interior() {
        return Err(HlzError::domain("hypergeometric inner form is evaluated inside the unit bidisc only"));
    }
    match form {
        InnerForm::General => {}
        InnerForm::DeltaEqXi if p.delta == p.xi => {}
        InnerForm::NuEqEtaDeltaEqXi if p.nu == p.eta && p.delta == p.xi && p.delta_p == p.xi_p => {}
        _ => return Err(HlzError::invalid(format!("parameters do not satisfy the collapse required by {form:?}"))),
    }
    let ratio = complex_div(pt.t, pt.z);
    let inner_cfg = SeriesConfig::with_tol(1e-16);
    let mut tracker = ConvergenceTracker::new(cfg);
    let mut outer = ONE;
    for k in 0..=cfg.max_diagonal {
        let kf = k as f64;
        if k > 0 {
            let j = kf - 1.0;
            outer *= pt.z / kf
                * match form {
                    InnerForm::General => (p.mu + j) * (p.eta + j) * (p.delta + j) / ((p.nu + j) * (p.xi + j)),
                    InnerForm::DeltaEqXi => (p.mu + j) * (p.eta + j) / (p.nu + j),
                    InnerForm::NuEqEtaDeltaEqXi => p.mu + j,
                };
        }
        let minus_k = Complex64::new(-kf, 0.0);
        let (upper, lower): (Vec<Complex64>, Vec<Complex64>) = match form {
            InnerForm::General => (
                vec![p.eta_p, p.delta_p, ONE - p.xi - kf, minus_k],
                vec![ONE - p.eta - kf, ONE - p.delta - kf, p.xi_p],
            ),
            InnerForm::DeltaEqXi => (vec![p.eta_p, p.delta_p, minus_k], vec![p.xi_p, ONE - p.eta - kf]),
            InnerForm::NuEqEtaDeltaEqXi => (vec![p.eta_p, minus_k], vec![ONE - p.eta - kf]),
        };
        let inner = eval_pfq(&upper, &lower, ratio, &inner_cfg)?;
        let weight = complex_power_neg_s(pt.a + kf, pt.s)?;
        tracker.push(outer * weight * inner.value, k + 1);
        if tracker.converged {
            break;
        }
    }
    tracker.finish(Method::Diagonal)
}

/// Partial sum `Σ_{r=0}^{r_max} (s)_r / r! · Φ(z, t, s+r, a) · x^r`, which tends to
/// `Φ(z, t, s, a - x)` for `|x| < |a|`.
///
/// Each `Φ` comes from [`eval_phi_diagonal`] (the double series when `z = 0`);
/// the terms are evaluated in parallel.
pub fn summation_formula_lhs(
    p: &ParameterSet,
    pt: &EvalPoint,
    x: Complex64,
    r_max: usize,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    p.validate()?;
    pt.validate()?;
    if x.norm() >= pt.a.norm() {
        return Err(HlzError::domain(format!("summation formula needs |x| < |a|, got |x| = {}", x.norm())));
    }
    if pt.s == ONE {
        return Err(HlzError::domain("summation formula is stated for s ≠ 1"));
    }
    let r_max = if x == ZERO { 0 } else { r_max };
    let mut coefs = Vec::with_capacity(r_max + 1);
    let mut coef = ONE;
    for r in 0..=r_max {
        if r > 0 {
            coef *= (pt.s + (r - 1) as f64) / r as f64 * x;
        }
        coefs.push(coef);
    }
    let terms: Vec<Result<EvalResult>> = coefs
        .par_iter()
        .enumerate()
        .map(|(r, _)| {
            let shifted = pt.with_s(pt.s + r as f64);
            if pt.z == ZERO {
                eval_phi_double_series(p, &shifted, cfg)
            } else {
                eval_phi_diagonal(p, &shifted, cfg)
            }
        })
        .collect();

    let mut value = ZERO;
    let mut abs_err = 0.0;
    let mut work = 0;
    let mut last = 0.0;
    for (coef, term) in coefs.iter().zip(terms) {
        let term = term?;
        let contribution = coef * term.value;
        value += contribution;
        abs_err += coef.norm() * term.abs_err;
        work += term.work;
        last = contribution.norm();
    }
    if r_max > 0 {
        abs_err += last;
    }
    Ok(EvalResult { value, abs_err, work, method: Method::Diagonal, converged: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn cfg() -> SeriesConfig {
        SeriesConfig::with_tol(1e-15)
    }

    /// μ = ν, δ = ξ, δ′ = ξ′, η = η′ = 1: the classical one-variable function when t = 0.
    fn classical() -> ParameterSet {
        ParameterSet::real(1.7, 1.0, 1.0, 2.2, 0.6, 1.7, 2.2, 0.6)
    }

    fn generic() -> ParameterSet {
        ParameterSet::real(2.0, 1.5, 0.5, 1.2, 0.8, 3.0, 2.2, 1.7)
    }

    #[test]
    fn power_law_point() {
        let r = eval_phi_double_series(&generic(), &EvalPoint::real(0.0, 0.0, 2.0, 4.0), &cfg()).unwrap();
        assert_eq!(r.value, c(0.0625));
        assert!(r.converged);
    }

    #[test]
    fn classical_log_reduction() {
        let r = eval_phi_double_series(&classical(), &EvalPoint::real(0.5, 0.0, 1.0, 1.0), &cfg()).unwrap();
        let oracle = -(0.5f64.ln()) / 0.5;
        assert!((r.value.re - oracle).abs() < 1e-13, "{}", r.value);
    }

    #[test]
    fn basel_on_the_boundary() {
        let r = eval_phi_double_series(&classical(), &EvalPoint::real(1.0, 0.0, 2.0, 1.0), &cfg()).unwrap();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.value.re - zeta2).abs() < 1e-12, "{} vs {zeta2}", r.value);
        // mirrored edge
        let r = eval_phi_double_series(&classical(), &EvalPoint::real(0.0, 1.0, 2.0, 1.0), &cfg()).unwrap();
        assert!((r.value.re - zeta2).abs() < 1e-12);
    }

    #[test]
    fn classical_phi() {
        let r = eval_classical_phi(c(0.5), c(1.0), c(1.0), &cfg()).unwrap();
        assert!((r.value.re - 2.0 * 2f64.ln()).abs() < 1e-13);
        let r = eval_classical_phi(c(1.0), c(4.0), c(1.0), &cfg()).unwrap();
        assert!((r.value.re - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12);
        assert!(eval_classical_phi(c(1.0), c(1.2), c(1.0), &cfg()).is_err());
    }

    #[test]
    fn boundary_with_small_margin_is_rejected() {
        // Re(s + ν + ξ − μ − η − δ) = 1.4 − 1 = 0.4 < 0.5
        let r = eval_phi_double_series(&classical(), &EvalPoint::real(1.0, 0.0, 1.4, 1.0), &cfg());
        assert!(matches!(r, Err(HlzError::Domain(_))));
        // unit circle away from the supported edge points
        let r = eval_phi_double_series(&classical(), &EvalPoint::real(-1.0, 0.0, 3.0, 1.0), &cfg());
        assert!(matches!(r, Err(HlzError::Domain(_))));
        let r = eval_phi_double_series(&classical(), &EvalPoint::real(0.5, 1.2, 3.0, 1.0), &cfg());
        assert!(matches!(r, Err(HlzError::Domain(_))));
    }

    #[test]
    fn invalid_shift_is_rejected() {
        let r = eval_phi_double_series(&generic(), &EvalPoint::real(0.2, 0.1, 2.0, -3.0), &cfg());
        assert!(matches!(r, Err(HlzError::Domain(_))));
    }

    #[test]
    fn hurwitz_zeta_with_shift() {
        // Φ(1, 3, 2.5) = ζ(3, 2.5) = ζ(3) − 1 − (1.5)^{-3}... computed against a long direct sum
        let p = classical();
        let r = eval_phi_double_series(&p, &EvalPoint::real(1.0, 0.0, 3.0, 2.5), &cfg()).unwrap();
        let mut direct = 0.0;
        for k in (0..2_000_000).rev() {
            direct += (k as f64 + 2.5).powi(-3);
        }
        // tail beyond 2e6 ≈ 1/(2 · (2e6)^2)
        direct += 0.5 / (2.0e6f64).powi(2);
        assert!((r.value.re - direct).abs() < 1e-12, "{} vs {direct}", r.value);
    }

    #[test]
    fn diagonal_matches_double_series() {
        let pt = EvalPoint::real(0.4, 0.3, 2.0, 1.5);
        let d = eval_phi_diagonal(&generic(), &pt, &cfg()).unwrap();
        let s = eval_phi_double_series(&generic(), &pt, &cfg()).unwrap();
        assert!((d.value - s.value).norm() < 1e-12, "{} vs {}", d.value, s.value);
        assert_eq!(d.method, Method::Diagonal);
    }

    #[test]
    fn diagonal_edge_cases() {
        let p = generic();
        let pt = EvalPoint::real(0.4, 0.0, 2.0, 1.5);
        let d = eval_phi_diagonal(&p, &pt, &cfg()).unwrap();
        let s = eval_phi_double_series(&p, &pt, &cfg()).unwrap();
        assert!((d.value - s.value).norm() < 1e-14);
        assert!(matches!(
            eval_phi_diagonal(&p, &EvalPoint::real(0.0, 0.3, 2.0, 1.5), &cfg()),
            Err(HlzError::Domain(_))
        ));
        // only the k = 0 term is visible at this scale
        let tiny = EvalPoint::real(1e-200, 1e-200, 2.0, 1.5);
        let d = eval_phi_diagonal(&p, &tiny, &cfg()).unwrap();
        assert!((d.value.re - 1.5f64.powf(-2.0)).abs() < 1e-16);
    }

    #[test]
    fn inner_forms_agree() {
        let p = generic();
        let ratio = c(0.75);
        for k in 0..12 {
            let direct = diagonal_inner_direct(&p, k, ratio);
            let pfq = diagonal_inner_4f3(&p, k, ratio).expect("pole-free").unwrap();
            assert!((direct - pfq).norm() < 1e-12 * direct.norm().max(1.0), "k = {k}");
        }
        // a positive integer η gives 1 − η − k ≤ −k, which never vanishes inside l ≤ k
        let q = ParameterSet { eta: c(2.0), ..p };
        let pfq = diagonal_inner_4f3(&q, 5, ratio).expect("pole-free").unwrap();
        assert!((pfq - diagonal_inner_direct(&q, 5, ratio)).norm() < 1e-12 * pfq.norm());
        // η = −1 puts the zero of (1 − η − k)_l inside the range once k > 2
        let q = ParameterSet { eta: c(-1.0), ..p };
        assert!(diagonal_inner_4f3(&q, 5, ratio).is_none());
        assert!(diagonal_inner_4f3(&q, 1, ratio).is_some());
    }

    #[test]
    fn classify_examples() {
        let pt = EvalPoint::real(0.3, 0.2, 2.0, 1.0);
        let cp = ParameterSet::real(1.5, 0.7, 0.9, 2.0, 3.0, 2.5, 2.0, 3.0);
        assert_eq!(classify_reduction(&cp, &pt), ReductionTag::ThreeParameter);
        let pd = ParameterSet { nu: cp.mu, ..cp };
        assert_eq!(classify_reduction(&pd, &pt), ReductionTag::TwoParameter);
        let cl = ParameterSet { eta: c(1.0), ..pd };
        assert_eq!(classify_reduction(&cl, &EvalPoint::real(0.3, 0.0, 2.0, 1.0)), ReductionTag::ClassicalPhi);
        assert_eq!(classify_reduction(&cl, &pt), ReductionTag::TwoParameter);
        assert_eq!(classify_reduction(&generic(), &pt), ReductionTag::General);
        assert_eq!(classify_reduction(&generic(), &EvalPoint::real(0.0, 0.0, 2.0, 1.0)), ReductionTag::PowerLaw);
        // exact equality only
        let near = ParameterSet { delta: c(2.0 + 1e-15), ..cp };
        assert_eq!(classify_reduction(&near, &pt), ReductionTag::General);
    }

    #[test]
    fn limit_cases_trivial_points() {
        let p = generic();
        let pt = EvalPoint::real(0.0, 0.0, 2.0, 4.0);
        let r = eval_phi_limit_case(&p, LimitVariant::MuInf, &pt, &cfg()).unwrap();
        assert_eq!(r.value, c(0.0625));
        let pt = EvalPoint::real(0.45, 0.0, 1.5, 0.7);
        let both = eval_phi_limit_case(&p, LimitVariant::MuAndEtaPrimeInf, &pt, &cfg()).unwrap();
        let mu = eval_phi_limit_case(&p, LimitVariant::MuInf, &pt, &cfg()).unwrap();
        assert_eq!(both.value, mu.value);
    }

    #[test]
    fn summation_formula_trivial_cases() {
        let p = generic();
        let pt = EvalPoint::real(0.4, 0.3, 2.0, 1.5);
        let direct = eval_phi_diagonal(&p, &pt, &cfg()).unwrap().value;
        let lhs = summation_formula_lhs(&p, &pt, c(0.0), 40, &cfg()).unwrap();
        assert_eq!(lhs.value, direct);
        let lhs = summation_formula_lhs(&p, &pt, c(0.3), 0, &cfg()).unwrap();
        assert_eq!(lhs.value, direct);
        assert!(matches!(summation_formula_lhs(&p, &pt, c(1.5), 10, &cfg()), Err(HlzError::Domain(_))));
        assert!(matches!(
            summation_formula_lhs(&p, &pt.with_s(c(1.0)), c(0.2), 10, &cfg()),
            Err(HlzError::Domain(_))
        ));
    }

    #[test]
    fn ln_gamma_shift_branches_agree() {
        for &cc in &[c(0.5), c(2.7), Complex64::new(1.2, -0.8)] {
            let x = 1e3 * (1.0 + cc.norm()).powi(2) * 1.0001;
            let asym = ln_gamma_shift(cc, x);
            let direct = log_gamma(cc + x).unwrap() - log_gamma(c(x)).unwrap();
            assert!((asym - direct).norm() < 1e-10, "{cc}: {asym} vs {direct}");
        }
    }
}
