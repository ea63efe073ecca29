//! Diagonal summation of two-variable hypergeometric-type series
//!
//! ```text
//!   Σ_{k,l} A_{k+l} · u_k · v_l · w(k+l)
//!   A_n = ∏(coupled num)_n / ∏(coupled den)_n
//!   u_k = ∏(x num)_k / ∏(x den)_k · x^k / k!      (v_l likewise in y)
//! ```
//!
//! grouped by shells `n = k + l`. `A_n` and the weight `w(n)` are constant on a
//! shell, so each shell costs one Cauchy-product inner sum.

use num_complex::Complex64;

use crate::error::{HlzError, Result};
use crate::special::{log_gamma, nonpositive_integer_order, pochhammer_ratio};
use crate::types::{EvalResult, Method, SeriesConfig};

/// Recurrence-updated factors are recomputed from scratch at this period.
pub(crate) const RESYNC_PERIOD: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Neumaier-compensated complex accumulator; keeps cancelling sums from
/// losing more than a rounding of the result to addition error.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    fn add_part(sum: &mut f64, carry: &mut f64, x: f64) {
        let t = *sum + x;
        *carry += if sum.abs() >= x.abs() { (*sum - t) + x } else { (x - t) + *sum };
        *sum = t;
    }

    pub fn add(&mut self, x: Complex64) {
        Self::add_part(&mut self.sum.re, &mut self.carry.re, x.re);
        Self::add_part(&mut self.sum.im, &mut self.carry.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

/// Numerator and denominator Pochhammer parameters of one factor group.
#[derive(Debug, Clone, Default)]
pub(crate) struct Factors {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl Factors {
    pub fn new(num: &[Complex64], den: &[Complex64]) -> Self {
        Factors { num: num.to_vec(), den: den.to_vec() }
    }

    /// Index past which every `(num)_n` product vanishes.
    pub fn termination(&self) -> Option<usize> {
        self.num.iter().filter_map(|&c| nonpositive_integer_order(c)).min()
    }

    fn has_integer_parameter(&self) -> bool {
        self.num.iter().chain(&self.den).any(|&c| nonpositive_integer_order(c).is_some())
    }

    /// `∏(num + j) / ∏(den + j)`.
    fn step(&self, j: usize) -> Complex64 {
        let jf = j as f64;
        let mut r = ONE;
        for &c in &self.num {
            r *= c + jf;
        }
        for &d in &self.den {
            r /= d + jf;
        }
        r
    }
}

/// Lazily grown table of `u_k = ∏(num)_k/∏(den)_k · x^k/k!`.
#[derive(Debug, Clone)]
struct SideTerms {
    factors: Factors,
    arg: Complex64,
    terminates_at: Option<usize>,
    values: Vec<Complex64>,
}

impl SideTerms {
    fn new(factors: Factors, arg: Complex64) -> Self {
        let arg_zero = arg == ZERO;
        let terminates_at = match (factors.termination(), arg_zero) {
            (_, true) => Some(0),
            (t, false) => t,
        };
        SideTerms { factors, arg, terminates_at, values: vec![ONE] }
    }

    fn get(&mut self, k: usize) -> Complex64 {
        if self.terminates_at.is_some_and(|m| k > m) {
            return ZERO;
        }
        while self.values.len() <= k {
            let j = self.values.len();
            let prev = self.values[j - 1];
            let next = if j.is_multiple_of(RESYNC_PERIOD) && !self.factors.has_integer_parameter() {
                self.recomputed(j)
            } else {
                prev * self.factors.step(j - 1) * self.arg / j as f64
            };
            self.values.push(next);
        }
        self.values[k]
    }

    /// `exp(Σ lnΓ(c+k) - lnΓ(c) - ... - lnΓ(k+1) + k·Log x)`.
    fn recomputed(&self, k: usize) -> Complex64 {
        let kf = k as f64;
        let lg = |c: Complex64| log_gamma(c).expect("parameters are pole-free here");
        let mut log = self.arg.ln() * kf - lg(Complex64::new(kf + 1.0, 0.0));
        for &c in &self.factors.num {
            log += lg(c + kf) - lg(c);
        }
        for &d in &self.factors.den {
            log -= lg(d + kf) - lg(d);
        }
        log.exp()
    }
}

/// One two-variable series, ready to be summed with a per-shell weight.
#[derive(Debug, Clone)]
pub(crate) struct DoubleSeries {
    pub coupled: Factors,
    pub x_side: Factors,
    pub y_side: Factors,
    pub x: Complex64,
    pub y: Complex64,
}

/// Raw outcome of a fixed number of shells.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PartialSum {
    pub value: Complex64,
    pub work: usize,
    pub abs_sum: f64,
}

impl DoubleSeries {
    /// Shell index past which every term vanishes, if the series terminates.
    pub fn terminating_index(&self) -> Option<usize> {
        let coupled = self.coupled.termination();
        let side = |f: &Factors, arg: Complex64| if arg == ZERO { Some(0) } else { f.termination() };
        let sides = match (side(&self.x_side, self.x), side(&self.y_side, self.y)) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        match (coupled, sides) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Rejects denominator parameters that hit a zero factor before the series
    /// has terminated.
    pub fn validate_denominators(&self) -> Result<()> {
        let total = self.terminating_index();
        let x_end = if self.x == ZERO { Some(0) } else { self.x_side.termination() };
        let y_end = if self.y == ZERO { Some(0) } else { self.y_side.termination() };
        let check = |dens: &[Complex64], local_end: Option<usize>| -> Result<()> {
            for &d in dens {
                if let Some(m) = nonpositive_integer_order(d) {
                    let ok = local_end.is_some_and(|e| e <= m) || total.is_some_and(|e| e <= m);
                    if !ok {
                        return Err(HlzError::domain(format!(
                            "denominator parameter {d} is a non-positive integer reached before the series terminates"
                        )));
                    }
                }
            }
            Ok(())
        };
        check(&self.coupled.den, total)?;
        check(&self.x_side.den, x_end)?;
        check(&self.y_side.den, y_end)
    }

    fn coupled_value(&self, n: usize, prev: Complex64) -> Complex64 {
        if n == 0 {
            ONE
        } else if n.is_multiple_of(RESYNC_PERIOD) {
            pochhammer_ratio(&self.coupled.num, &self.coupled.den, n)
        } else {
            prev * self.coupled.step(n - 1)
        }
    }

    /// Walks the shells, handing `(n, shell contribution, terms used)` to `visit`
    /// until it returns `false` or `n` exceeds `max_n`.
    fn walk<W, V>(&self, mut weight: W, max_n: usize, mut visit: V)
    where
        W: FnMut(usize) -> Complex64,
        V: FnMut(usize, Complex64, usize) -> bool,
    {
        let mut u = SideTerms::new(self.x_side.clone(), self.x);
        let mut v = SideTerms::new(self.y_side.clone(), self.y);
        let mut coupled = ONE;
        for n in 0..=max_n {
            coupled = self.coupled_value(n, coupled);
            let (inner, terms) = if coupled == ZERO {
                (ZERO, 0)
            } else {
                let k_hi = u.terminates_at.map_or(n, |m| m.min(n));
                let k_lo = v.terminates_at.map_or(0, |m| n.saturating_sub(m));
                let mut acc = CompensatedSum::default();
                let mut terms = 0;
                if k_lo <= k_hi {
                    for k in k_lo..=k_hi {
                        acc.add(u.get(k) * v.get(n - k));
                    }
                    terms = k_hi - k_lo + 1;
                }
                (acc.value(), terms)
            };
            let contribution = if inner == ZERO { ZERO } else { coupled * inner * weight(n) };
            if !visit(n, contribution, terms) {
                break;
            }
        }
    }

    /// Sum of shells `0..n_shells` with no convergence test.
    pub fn sum_shells<W: FnMut(usize) -> Complex64>(&self, weight: W, n_shells: usize) -> PartialSum {
        let mut out = PartialSum { value: ZERO, work: 0, abs_sum: 0.0 };
        if n_shells == 0 {
            return out;
        }
        self.walk(weight, n_shells - 1, |_, c, terms| {
            out.value += c;
            out.abs_sum += c.norm();
            out.work += terms;
            true
        });
        out
    }

    /// Sums until `cfg.stall_count` consecutive shells fall below
    /// `cfg.tol · max(1, |partial sum|)`. Terminating series are summed exactly
    /// to their last shell instead.
    pub fn sum<W: FnMut(usize) -> Complex64>(
        &self,
        weight: W,
        cfg: &SeriesConfig,
        method: Method,
    ) -> Result<EvalResult> {
        cfg.validate()?;
        self.validate_denominators()?;
        let terminating = self.terminating_index();
        let max_n = terminating.map_or(cfg.max_diagonal, |m| m.min(cfg.max_diagonal));

        let mut tracker = ConvergenceTracker::new(cfg);
        self.walk(weight, max_n, |_, c, terms| {
            tracker.push(c, terms);
            terminating.is_some() || !tracker.converged
        });
        if terminating.is_some_and(|m| m <= cfg.max_diagonal) {
            tracker.converged = true;
            tracker.exact = true;
        }
        tracker.finish(method)
    }
}

/// Stall-criterion bookkeeping shared by the series evaluators.
#[derive(Debug, Clone)]
pub(crate) struct ConvergenceTracker {
    tol: f64,
    stall_needed: usize,
    pub sum: Complex64,
    acc: CompensatedSum,
    pub abs_sum: f64,
    pub work: usize,
    stall: usize,
    last: f64,
    before_last: f64,
    pub converged: bool,
    /// Set for terminating series, whose sum is exact up to rounding.
    pub exact: bool,
}

impl ConvergenceTracker {
    pub fn new(cfg: &SeriesConfig) -> Self {
        ConvergenceTracker {
            tol: cfg.tol,
            stall_needed: cfg.stall_count,
            sum: ZERO,
            acc: CompensatedSum::default(),
            abs_sum: 0.0,
            work: 0,
            stall: 0,
            last: 0.0,
            before_last: 0.0,
            converged: false,
            exact: false,
        }
    }

    pub fn push(&mut self, contribution: Complex64, terms: usize) {
        self.acc.add(contribution);
        self.sum = self.acc.value();
        let mag = contribution.norm();
        self.abs_sum += mag;
        self.work += terms;
        self.before_last = self.last;
        self.last = mag;
        if mag <= self.tol * self.sum.norm().max(1.0) {
            self.stall += 1;
        } else {
            self.stall = 0;
        }
        if self.stall >= self.stall_needed {
            self.converged = true;
        }
    }

    /// Geometric extrapolation of the remaining tail from the last two shells.
    pub fn tail_estimate(&self) -> f64 {
        if self.exact {
            return 0.0;
        }
        if self.before_last > 0.0 {
            let q = self.last / self.before_last;
            if q < 1.0 {
                return self.last * q / (1.0 - q);
            }
        }
        self.last
    }

    pub fn abs_err(&self) -> f64 {
        self.tail_estimate() + 2.0 * f64::EPSILON * self.abs_sum
    }

    pub fn finish(&self, method: Method) -> Result<EvalResult> {
        let result = EvalResult {
            value: self.sum,
            abs_err: self.abs_err(),
            work: self.work,
            method,
            converged: self.converged,
        };
        if self.converged {
            Ok(result)
        } else {
            Err(HlzError::NoConvergence(Box::new(result)))
        }
    }
}
