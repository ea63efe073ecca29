//! Parameter, argument, configuration and result types shared by every evaluator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HlzError, Result};
use crate::special::is_nonpositive_integer;

/// The eight parameters `(μ, η, η′, δ, δ′; ν, ξ, ξ′)` of the extended zeta function
/// and of the M4 kernel.
///
/// `mu`, `eta`, `eta_p`, `delta`, `delta_p` are numerator parameters; `nu`, `xi`,
/// `xi_p` sit in denominators and may not be non-positive integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    pub mu: Complex64,
    pub eta: Complex64,
    pub eta_p: Complex64,
    pub delta: Complex64,
    pub delta_p: Complex64,
    pub nu: Complex64,
    pub xi: Complex64,
    pub xi_p: Complex64,
}

impl ParameterSet {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mu: Complex64,
        eta: Complex64,
        eta_p: Complex64,
        delta: Complex64,
        delta_p: Complex64,
        nu: Complex64,
        xi: Complex64,
        xi_p: Complex64,
    ) -> Result<Self> {
        let p = ParameterSet { mu, eta, eta_p, delta, delta_p, nu, xi, xi_p };
        p.validate()?;
        Ok(p)
    }

    /// Real-valued parameter set, in the order `μ, η, η′, δ, δ′, ν, ξ, ξ′`.
    #[allow(clippy::too_many_arguments)]
    pub fn real(
        mu: f64,
        eta: f64,
        eta_p: f64,
        delta: f64,
        delta_p: f64,
        nu: f64,
        xi: f64,
        xi_p: f64,
    ) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        ParameterSet {
            mu: c(mu),
            eta: c(eta),
            eta_p: c(eta_p),
            delta: c(delta),
            delta_p: c(delta_p),
            nu: c(nu),
            xi: c(xi),
            xi_p: c(xi_p),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("mu", self.mu),
            ("eta", self.eta),
            ("eta_p", self.eta_p),
            ("delta", self.delta),
            ("delta_p", self.delta_p),
            ("nu", self.nu),
            ("xi", self.xi),
            ("xi_p", self.xi_p),
        ];
        for (name, v) in all {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(HlzError::invalid(format!("{name} = {v} is not finite")));
            }
        }
        for (name, v) in [("nu", self.nu), ("xi", self.xi), ("xi_p", self.xi_p)] {
            if is_nonpositive_integer(v) {
                return Err(HlzError::invalid(format!(
                    "{name} = {v} is a non-positive integer"
                )));
            }
        }
        Ok(())
    }

    /// The simultaneous exchange `η↔η′, δ↔δ′, ξ↔ξ′` which, paired with `z↔t`,
    /// leaves the function unchanged.
    pub fn swapped(&self) -> Self {
        ParameterSet {
            mu: self.mu,
            eta: self.eta_p,
            eta_p: self.eta,
            delta: self.delta_p,
            delta_p: self.delta,
            nu: self.nu,
            xi: self.xi_p,
            xi_p: self.xi,
        }
    }

    /// `Re(ν + ξ + ξ′ − μ − η − η′ − δ − δ′)`, the parameter part of the boundary
    /// convergence exponent.
    pub fn excess(&self) -> f64 {
        (self.nu + self.xi + self.xi_p - self.mu - self.eta - self.eta_p - self.delta - self.delta_p)
            .re
    }
}

/// The arguments `(z, t, s, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub z: Complex64,
    pub t: Complex64,
    pub s: Complex64,
    pub a: Complex64,
}

impl EvalPoint {
    pub fn new(z: Complex64, t: Complex64, s: Complex64, a: Complex64) -> Result<Self> {
        let pt = EvalPoint { z, t, s, a };
        pt.validate()?;
        Ok(pt)
    }

    pub fn real(z: f64, t: f64, s: f64, a: f64) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        EvalPoint { z: c(z), t: c(t), s: c(s), a: c(a) }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("z", self.z), ("t", self.t), ("s", self.s), ("a", self.a)] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(HlzError::invalid(format!("{name} = {v} is not finite")));
            }
        }
        if is_nonpositive_integer(self.a) {
            return Err(HlzError::domain(format!("a = {} is a non-positive integer", self.a)));
        }
        Ok(())
    }

    /// True iff `|z| < 1` and `|t| < 1`.
    pub fn is_interior(&self) -> bool {
        self.z.norm() < 1.0 && self.t.norm() < 1.0
    }

    pub fn swapped(&self) -> Self {
        EvalPoint { z: self.t, t: self.z, ..*self }
    }

    pub fn with_a(&self, a: Complex64) -> Self {
        EvalPoint { a, ..*self }
    }

    pub fn with_s(&self, s: Complex64) -> Self {
        EvalPoint { s, ..*self }
    }
}

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Single-variable hypergeometric series.
    Series,
    DoubleSeries,
    Diagonal,
    QuadM4,
    QuadHumbert,
    QuadBeta1D,
    QuadBeta2D,
    ClosedKernel,
    Dispatch,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::DoubleSeries => "double-series",
            Method::Diagonal => "diagonal",
            Method::QuadM4 => "quad-m4",
            Method::QuadHumbert => "quad-humbert",
            Method::QuadBeta1D => "quad-beta-1d",
            Method::QuadBeta2D => "quad-beta-2d",
            Method::ClosedKernel => "closed-kernel",
            Method::Dispatch => "dispatch",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one evaluation.
///
/// When `converged` is false, `abs_err` is the last observed tail estimate rather
/// than the requested tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err: f64,
    /// Terms summed or integrand nodes evaluated.
    pub work: usize,
    pub method: Method,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Requested tolerance. A diagonal counts as negligible when its contribution
    /// is below `tol * max(1, |partial sum|)`.
    pub tol: f64,
    /// Cap on the diagonal index `n = k + l`.
    pub max_diagonal: usize,
    /// Consecutive negligible diagonals required before declaring convergence.
    pub stall_count: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: 1e-14, max_diagonal: 20_000, stall_count: 3 }
    }
}

impl SeriesConfig {
    pub fn with_tol(tol: f64) -> Self {
        SeriesConfig { tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(HlzError::invalid(format!("series tol must be positive, got {}", self.tol)));
        }
        if self.max_diagonal < 1 {
            return Err(HlzError::invalid("max_diagonal must be at least 1"));
        }
        if self.stall_count < 1 {
            return Err(HlzError::invalid("stall_count must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Absolute tolerance on the integral.
    pub tol: f64,
    /// Number of step-halving refinements after the initial level.
    pub max_levels: usize,
    /// Upper limit `X` for integrals over `(0, ∞)` in the Mellin variable.
    /// `None` derives it from `tol`, `a` and `s`; see [`QuadConfig::tail_cut_for`].
    pub tail_cut: Option<f64>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { tol: 1e-10, max_levels: 10, tail_cut: None }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig { tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(HlzError::invalid(format!("quadrature tol must be positive, got {}", self.tol)));
        }
        if let Some(x) = self.tail_cut {
            if !(x > 0.0) || !x.is_finite() {
                return Err(HlzError::invalid(format!("tail_cut must be positive and finite, got {x}")));
            }
        }
        Ok(())
    }

    /// Truncation point `X` for `∫_X^∞ x^{σ-1} e^{-αx} K dx / |Γ(s)| < tol`, where
    /// `α = Re(a)`, `σ = Re(s)` and `K` bounds the kernel.
    ///
    /// Starts from `X = -ln(tol·α)/α` and iterates
    /// `X = (ln(K/(|Γ(s)|·tol·α)) + max(σ-1, 0)·ln X)/α`, padded by 5% plus one,
    /// so the polynomial factor is covered. An explicit `tail_cut` overrides the
    /// computation.
    pub fn tail_cut_for(&self, s: Complex64, a: Complex64, kernel_bound: f64, abs_gamma_s: f64) -> f64 {
        if let Some(x) = self.tail_cut {
            return x;
        }
        let alpha = a.re;
        let sigma = s.re;
        let scale = (kernel_bound.max(1.0) / abs_gamma_s.max(1e-300)).max(1.0);
        let mut x = (-(self.tol * alpha).ln() / alpha).max(1.0);
        for _ in 0..20 {
            let next = ((scale / (self.tol * alpha)).ln() + (sigma - 1.0).max(0.0) * x.ln()) / alpha;
            let next = next.max(1.0) * 1.05 + 1.0;
            if (next - x).abs() < 1e-3 {
                x = next;
                break;
            }
            x = next;
        }
        x
    }
}
