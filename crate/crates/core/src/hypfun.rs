//! Hypergeometric functions: `pFq`, Appell `F1`, the confluent Humbert functions
//! `Φ1`, `Φ2`, `Φ3`, and the Appell-type `M4` with its closed form.
//!
//! All double series are summed along shells `n = k + l` by [`DoubleSeries`].

use num_complex::Complex64;

use crate::error::{HlzError, Result};
use crate::series::{ConvergenceTracker, DoubleSeries, Factors};
use crate::special::complex_power_neg_s;
use crate::types::{EvalResult, Method, ParameterSet, SeriesConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `pFq(num; den; z) = Σ_n ∏(num_i)_n / ∏(den_j)_n · z^n / n!`.
///
/// A non-positive integer numerator terminates the sum, which is then computed
/// exactly. Non-terminating series need `p ≤ q`, or `p = q + 1` with `|z| < 1`.
pub fn eval_pfq(num: &[Complex64], den: &[Complex64], z: Complex64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let series = DoubleSeries {
        coupled: Factors::default(),
        x_side: Factors::new(num, den),
        y_side: Factors::default(),
        x: z,
        y: ZERO,
    };
    if series.terminating_index().is_none() {
        let (p, q) = (num.len(), den.len());
        if p > q + 1 {
            return Err(HlzError::domain(format!(
                "{p}F{q} with no terminating numerator parameter diverges for z ≠ 0"
            )));
        }
        if p == q + 1 && z.norm() >= 1.0 {
            return Err(HlzError::domain(format!("{p}F{q} requires |z| < 1, got |z| = {}", z.norm())));
        }
    }
    series.sum(|_| ONE, cfg, Method::Series)
}

fn require_unit_disc(name: &str, v: Complex64) -> Result<()> {
    if v.norm() < 1.0 {
        Ok(())
    } else {
        Err(HlzError::domain(format!("{name} requires |{name}| < 1, got {}", v.norm())))
    }
}

/// Appell `F1(a, b, b′; c; z, t) = Σ (a)_{k+l}(b)_k(b′)_l / ((c)_{k+l} k! l!) z^k t^l`.
///
/// Uses the modulus region `|z| < 1`, `|t| < 1`.
pub fn eval_appell_f1(
    a: Complex64,
    b: Complex64,
    b_p: Complex64,
    c: Complex64,
    z: Complex64,
    t: Complex64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    let series = DoubleSeries {
        coupled: Factors::new(&[a], &[c]),
        x_side: Factors::new(&[b], &[]),
        y_side: Factors::new(&[b_p], &[]),
        x: z,
        y: t,
    };
    if series.terminating_index().is_none() {
        require_unit_disc("z", z)?;
        require_unit_disc("t", t)?;
    }
    series.sum(|_| ONE, cfg, Method::DoubleSeries)
}

/// `F1` through its row expansion
/// `Σ_k (a)_k (b)_k / (c)_k · 2F1(a+k, b′; c+k; t) · z^k / k!`.
///
/// An independent route to [`eval_appell_f1`] used for cross-checking.
pub fn eval_appell_f1_rows(
    a: Complex64,
    b: Complex64,
    b_p: Complex64,
    c: Complex64,
    z: Complex64,
    t: Complex64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    cfg.validate()?;
    require_unit_disc("z", z)?;
    require_unit_disc("t", t)?;
    let inner_cfg = SeriesConfig { tol: cfg.tol * 1e-2, ..*cfg };
    let mut tracker = ConvergenceTracker::new(cfg);
    let mut coef = ONE;
    for k in 0..=cfg.max_diagonal {
        if k > 0 {
            let j = (k - 1) as f64;
            coef *= (a + j) * (b + j) / (c + j) * z / k as f64;
        }
        if coef == ZERO {
            tracker.push(ZERO, 0);
        } else {
            let kf = k as f64;
            let row = eval_pfq(&[a + kf, b_p], &[c + kf], t, &inner_cfg)?;
            tracker.push(coef * row.value, row.work);
        }
        if tracker.converged {
            break;
        }
    }
    tracker.finish(Method::Series)
}

/// Humbert `Φ1(a, b; c; z, t) = Σ (a)_{k+l}(b)_k / ((c)_{k+l} k! l!) z^k t^l`, `|z| < 1`.
pub fn eval_humbert_phi1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    t: Complex64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    let series = DoubleSeries {
        coupled: Factors::new(&[a], &[c]),
        x_side: Factors::new(&[b], &[]),
        y_side: Factors::default(),
        x: z,
        y: t,
    };
    if series.terminating_index().is_none() {
        require_unit_disc("z", z)?;
    }
    series.sum(|_| ONE, cfg, Method::DoubleSeries)
}

/// Humbert `Φ2(b, b′; c; z, t) = Σ (b)_k(b′)_l / ((c)_{k+l} k! l!) z^k t^l`, entire in `z, t`.
pub fn eval_humbert_phi2(
    b: Complex64,
    b_p: Complex64,
    c: Complex64,
    z: Complex64,
    t: Complex64,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    DoubleSeries {
        coupled: Factors::new(&[], &[c]),
        x_side: Factors::new(&[b], &[]),
        y_side: Factors::new(&[b_p], &[]),
        x: z,
        y: t,
    }
    .sum(|_| ONE, cfg, Method::DoubleSeries)
}

/// Humbert `Φ3(b; c; z, t) = Σ (b)_k / ((c)_{k+l} k! l!) z^k t^l`, entire in `z, t`.
pub fn eval_humbert_phi3(b: Complex64, c: Complex64, z: Complex64, t: Complex64, cfg: &SeriesConfig) -> Result<EvalResult> {
    DoubleSeries {
        coupled: Factors::new(&[], &[c]),
        x_side: Factors::new(&[b], &[]),
        y_side: Factors::default(),
        x: z,
        y: t,
    }
    .sum(|_| ONE, cfg, Method::DoubleSeries)
}

/// The series of `M4(μ, η, η′, δ, δ′; ν, ξ, ξ′; x, y)` before any weight is attached.
pub(crate) fn m4_series(p: &ParameterSet, x: Complex64, y: Complex64) -> DoubleSeries {
    DoubleSeries {
        coupled: Factors::new(&[p.mu], &[p.nu]),
        x_side: Factors::new(&[p.eta, p.delta], &[p.xi]),
        y_side: Factors::new(&[p.eta_p, p.delta_p], &[p.xi_p]),
        x,
        y,
    }
}

/// Appell-type `M4 = Σ (μ)_{k+l}(η)_k(η′)_l(δ)_k(δ′)_l / ((ν)_{k+l}(ξ)_k(ξ′)_l) x^k y^l / (k! l!)`,
/// for `|x| < 1`, `|y| < 1`.
pub fn eval_m4(p: &ParameterSet, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> Result<EvalResult> {
    p.validate()?;
    let series = m4_series(p, x, y);
    if series.terminating_index().is_none() {
        require_unit_disc("x", x)?;
        require_unit_disc("y", y)?;
    }
    series.sum(|_| ONE, cfg, Method::DoubleSeries)
}

/// `(1 - x)^{-η} (1 - y)^{-η′}`, the value of `M4` when `μ = ν`, `δ = ξ`, `δ′ = ξ′`.
pub fn m4_closed_form(eta: Complex64, eta_p: Complex64, x: Complex64, y: Complex64) -> Result<Complex64> {
    if x == ONE || y == ONE {
        return Err(HlzError::domain("closed form of M4 is singular at x = 1 or y = 1"));
    }
    Ok(complex_power_neg_s(ONE - x, eta)? * complex_power_neg_s(ONE - y, eta_p)?)
}
