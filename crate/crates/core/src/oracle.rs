//! Brute-force reference sums for tests.
//!
//! Every term of the rectangle `0 ≤ k ≤ K`, `0 ≤ l ≤ L` is assembled from
//! per-index Pochhammer tables (no term-ratio recurrences, no shell grouping)
//! and accumulated row by row in double-double arithmetic. The discarded
//! remainder is bounded by geometric majorants of the term ratios.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{HlzError, Result};
use crate::types::{EvalPoint, ParameterSet};

/// Largest admissible `|z|`, `|t|`.
pub const MAX_MODULUS: f64 = 0.9;
/// Largest admissible `k_max`, `l_max`.
pub const MAX_INDEX: usize = 5000;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        DoubleDouble::ONE / self
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        // one Newton correction of the double quotient
        let q1 = self.hi / o.hi;
        let r = self - o * DoubleDouble::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DoubleDouble::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexDD {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexDD {
    pub const ZERO: ComplexDD = ComplexDD { re: DoubleDouble::ZERO, im: DoubleDouble::ZERO };
    pub const ONE: ComplexDD = ComplexDD { re: DoubleDouble::ONE, im: DoubleDouble::ZERO };

    pub fn from_c64(c: Complex64) -> Self {
        ComplexDD { re: DoubleDouble::new(c.re), im: DoubleDouble::new(c.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm(self) -> f64 {
        self.to_c64().norm()
    }

    /// `1/self`, with the modulus scaled by a power of two first so that
    /// `|self|²` neither overflows nor underflows.
    pub fn recip(self) -> Self {
        let m = self.re.hi.abs().max(self.im.hi.abs());
        let scale = DoubleDouble::new(2f64.powi(-(m.log2().round() as i32)));
        let (re, im) = (self.re * scale, self.im * scale);
        let inv = (re * re + im * im).recip() * scale;
        ComplexDD { re: re * inv, im: -(im * inv) }
    }
}

impl Add for ComplexDD {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ComplexDD { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for ComplexDD {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ComplexDD { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// Reference value with its certified truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    /// Bound on the modulus of all discarded terms.
    pub tail_bound: f64,
    /// Bound on rounding in the retained terms (each is formed to about one ulp).
    pub rounding_bound: f64,
    pub terms: usize,
}

fn power_table(x: Complex64, n: usize) -> Vec<ComplexDD> {
    let x = ComplexDD::from_c64(x);
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = ComplexDD::ONE;
    out.push(acc);
    for _ in 0..n {
        acc = acc * x;
        out.push(acc);
    }
    out
}

/// `Π (num_i)_n / Π (den_i)_n` for `n ≤ len`, as running products of the
/// factors `(num_i + j)/(den_i + j)` so that no factorial-sized value appears.
fn ratio_table(num: &[Complex64], den: &[Complex64], len: usize) -> Vec<ComplexDD> {
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = ComplexDD::ONE;
    out.push(acc);
    for j in 0..len {
        // c + j is exact in double-double
        let shift = ComplexDD::from_c64(Complex64::new(j as f64, 0.0));
        let top = num.iter().fold(ComplexDD::ONE, |a, &c| a * (ComplexDD::from_c64(c) + shift));
        let bottom = den.iter().fold(ComplexDD::ONE, |a, &c| a * (ComplexDD::from_c64(c) + shift));
        acc = acc * top * bottom.recip();
        out.push(acc);
    }
    out
}

/// Lower bound on `|d + n|` over integers `n ≥ m`.
fn distance(d: Complex64, m: usize) -> f64 {
    let re = d.re + m as f64;
    if re >= 0.0 {
        Complex64::new(re, d.im).norm()
    } else {
        d.im.abs()
    }
}

/// Upper bound on `|(c + n)/(d + n)|` over `n ≥ m`.
fn ratio_bound(c: Complex64, d: Complex64, m: usize) -> f64 {
    let dist = distance(d, m);
    if dist == 0.0 {
        return f64::INFINITY;
    }
    1.0 + (c - d).norm() / dist
}

/// Upper bound on `|((n+a)/(n+1+a))^s|` over `n ≥ m`, from
/// `|ln(1+w)| ≤ |w|/(1-|w|)` with `w = 1/(n+a)`.
fn weight_ratio_bound(s: Complex64, a: Complex64, m: usize) -> f64 {
    if s == Complex64::new(0.0, 0.0) {
        return 1.0;
    }
    let dist = distance(a, m);
    if dist <= 1.0 {
        return f64::INFINITY;
    }
    let w = 1.0 / dist;
    (s.norm() * w / (1.0 - w)).exp()
}

/// Majorant of the term ratio along one index beyond `m`.
fn side_majorant(coupled: (Complex64, Complex64), side: &[(Complex64, Complex64)], x: Complex64, weight: f64, m: usize) -> f64 {
    if x.norm() == 0.0 {
        return 0.0;
    }
    let mut q = x.norm() * weight * ratio_bound(coupled.0, coupled.1, m);
    for &(c, d) in side {
        q *= ratio_bound(c, d, m);
    }
    q
}

struct Rectangle {
    terms: Vec<Vec<ComplexDD>>,
}

impl Rectangle {
    /// Terms `T(k, l)` with `weight(n)` multiplying shell `n = k + l`.
    fn build(p: &ParameterSet, x: Complex64, y: Complex64, k_max: usize, l_max: usize, weight: &dyn Fn(usize) -> ComplexDD) -> Self {
        let n_max = k_max + l_max;
        let coupled = ratio_table(&[p.mu], &[p.nu], n_max);
        let x_side = ratio_table(&[p.eta, p.delta], &[p.xi, Complex64::new(1.0, 0.0)], k_max);
        let y_side = ratio_table(&[p.eta_p, p.delta_p], &[p.xi_p, Complex64::new(1.0, 0.0)], l_max);
        let xp = power_table(x, k_max);
        let yp = power_table(y, l_max);
        let weights: Vec<_> = (0..=n_max).map(weight).collect();
        let terms = (0..=k_max)
            .map(|k| {
                let left = x_side[k] * xp[k];
                (0..=l_max).map(|l| coupled[k + l] * weights[k + l] * left * y_side[l] * yp[l]).collect()
            })
            .collect();
        Rectangle { terms }
    }

    fn sum(&self, reverse_rows: bool) -> ComplexDD {
        let mut total = ComplexDD::ZERO;
        for row in &self.terms {
            let mut acc = ComplexDD::ZERO;
            if reverse_rows {
                for &t in row.iter().rev() {
                    acc = acc + t;
                }
            } else {
                for &t in row {
                    acc = acc + t;
                }
            }
            total = total + acc;
        }
        total
    }

    fn abs_sum(&self) -> f64 {
        self.terms.iter().flatten().map(|t| t.norm()).sum()
    }

    /// Bound on the discarded terms given majorants `qx` (for `k > K`) and `qy`
    /// (for `l > L`).
    fn tail(&self, qx: f64, qy: f64) -> f64 {
        let k_max = self.terms.len() - 1;
        let l_max = self.terms[0].len() - 1;
        let gy = if qy == 0.0 { 0.0 } else { qy / (1.0 - qy) };
        let gx = if qx == 0.0 { 0.0 } else { qx / (1.0 - qx) };
        let last_row: f64 = self.terms[k_max].iter().map(|t| t.norm()).sum();
        let beyond_x = gx * (last_row + self.terms[k_max][l_max].norm() * gy);
        let beyond_y: f64 = self.terms.iter().map(|row| row[l_max].norm()).sum::<f64>() * gy;
        beyond_x + beyond_y
    }
}

fn check_inputs(x: Complex64, y: Complex64, k_max: usize, l_max: usize) -> Result<()> {
    if !(x.norm() <= MAX_MODULUS && y.norm() <= MAX_MODULUS) {
        return Err(HlzError::domain(format!("oracle needs |x|, |y| ≤ {MAX_MODULUS}")));
    }
    if k_max > MAX_INDEX || l_max > MAX_INDEX {
        return Err(HlzError::invalid(format!("oracle rectangle limited to {MAX_INDEX} per index")));
    }
    Ok(())
}

fn evaluate(p: &ParameterSet, x: Complex64, y: Complex64, k_max: usize, l_max: usize, s: Complex64, a: Complex64) -> Result<OracleValue> {
    p.validate()?;
    check_inputs(x, y, k_max, l_max)?;
    let weight = |n: usize| {
        if s == Complex64::new(0.0, 0.0) {
            ComplexDD::ONE
        } else {
            ComplexDD::from_c64((-s * (a + n as f64).ln()).exp())
        }
    };
    let rect = Rectangle::build(p, x, y, k_max, l_max, &weight);
    let w_x = weight_ratio_bound(s, a, k_max);
    let w_y = weight_ratio_bound(s, a, l_max);
    let one = Complex64::new(1.0, 0.0);
    let qx = side_majorant((p.mu, p.nu), &[(p.eta, one), (p.delta, p.xi)], x, w_x, k_max);
    let qy = side_majorant((p.mu, p.nu), &[(p.eta_p, one), (p.delta_p, p.xi_p)], y, w_y, l_max);
    let q = qx.max(qy);
    if !(q < 1.0) {
        return Err(HlzError::TailBoundUnavailable(q));
    }
    let abs_sum = rect.abs_sum();
    Ok(OracleValue {
        value: rect.sum(false).to_c64(),
        tail_bound: rect.tail(qx, qy),
        rounding_bound: 4.0 * f64::EPSILON * abs_sum,
        terms: (k_max + 1) * (l_max + 1),
    })
}

/// `Φ` summed over `0 ≤ k ≤ k_max`, `0 ≤ l ≤ l_max`, with a certified bound on the
/// rest. Needs `|z|, |t| ≤ 0.9`, both limits at most 5000, and a term-ratio
/// majorant below one beyond the rectangle.
pub fn oracle_phi(p: &ParameterSet, pt: &EvalPoint, k_max: usize, l_max: usize) -> Result<OracleValue> {
    pt.validate()?;
    evaluate(p, pt.z, pt.t, k_max, l_max, pt.s, pt.a)
}

/// `M4(p; x, y)` on the same terms as [`oracle_phi`].
pub fn oracle_m4(p: &ParameterSet, x: Complex64, y: Complex64, k_max: usize, l_max: usize) -> Result<OracleValue> {
    evaluate(p, x, y, k_max, l_max, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn generic() -> ParameterSet {
        ParameterSet::real(2.0, 1.5, 0.5, 1.2, 0.8, 3.0, 2.2, 1.7)
    }

    #[test]
    fn double_double_basics() {
        let third = DoubleDouble::ONE / DoubleDouble::new(3.0);
        let back = third * DoubleDouble::new(3.0) - DoubleDouble::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let tiny = DoubleDouble::new(1.0) + DoubleDouble::new(1e-20);
        assert_eq!(tiny.lo, 1e-20);
        assert!(((tiny - DoubleDouble::ONE).to_f64() - 1e-20).abs() < 1e-36);
    }

    #[test]
    fn power_law_corner() {
        let p = generic();
        let pt = EvalPoint::real(0.0, 0.0, 2.0, 4.0);
        let r = oracle_phi(&p, &pt, 10, 10).unwrap();
        assert_eq!(r.value, c(0.0625));
        assert_eq!(r.tail_bound, 0.0);
        let r = oracle_phi(&p, &EvalPoint::real(0.1, 0.1, 2.0, 4.0), 0, 0).unwrap();
        assert_eq!(r.value, c(0.0625));
    }

    #[test]
    fn m4_closed_form() {
        let p = ParameterSet::real(2.0, 1.0, 2.0, 1.3, 0.7, 2.0, 1.3, 0.7);
        let r = oracle_m4(&p, c(0.5), c(0.25), 150, 150).unwrap();
        assert!((r.value.re - 32.0 / 9.0).abs() <= r.tail_bound + r.rounding_bound + 1e-15);
        assert!(r.tail_bound < 1e-30);
        assert_eq!(oracle_m4(&p, c(0.0), c(0.0), 5, 5).unwrap().value, c(1.0));
    }

    #[test]
    fn swap_symmetry() {
        let p = generic();
        let pt = EvalPoint::real(0.4, 0.3, 2.0, 1.5);
        let a = oracle_phi(&p, &pt, 60, 70).unwrap();
        let b = oracle_phi(&p.swapped(), &pt.swapped(), 70, 60).unwrap();
        assert!((a.value - b.value).norm() < 1e-15 * a.value.norm());
    }

    #[test]
    fn enlarging_stays_within_bound() {
        let p = generic();
        let pt = EvalPoint::real(0.6, -0.5, 1.5, 0.7);
        let mut prev = oracle_phi(&p, &pt, 30, 30).unwrap();
        for n in [45, 70, 110] {
            let next = oracle_phi(&p, &pt, n, n).unwrap();
            assert!((next.value - prev.value).norm() <= prev.tail_bound + prev.rounding_bound);
            assert!(next.tail_bound < prev.tail_bound);
            prev = next;
        }
    }

    #[test]
    fn row_order_is_immaterial() {
        let p = ParameterSet::real(-0.5, 1.5, 2.5, 1.2, -1.3, 3.0, 2.2, 1.7);
        let pt = EvalPoint::real(-0.8, 0.85, 2.0, 1.5);
        let rect = Rectangle::build(&p, pt.z, pt.t, 200, 200, &|n| {
            ComplexDD::from_c64((-pt.s * (pt.a + n as f64).ln()).exp())
        });
        let (fwd, bwd) = (rect.sum(false).to_c64(), rect.sum(true).to_c64());
        assert!((fwd - bwd).norm() < 1e-14 * fwd.norm());
    }

    #[test]
    fn rejects_outside_region() {
        let p = generic();
        assert!(matches!(oracle_phi(&p, &EvalPoint::real(0.95, 0.0, 2.0, 1.0), 10, 10), Err(HlzError::Domain(_))));
        assert!(oracle_phi(&p, &EvalPoint::real(0.5, 0.0, 2.0, 1.0), 6000, 10).is_err());
        // majorant above one right after a short rectangle
        let big = ParameterSet::real(40.0, 30.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            oracle_phi(&big, &EvalPoint::real(0.9, 0.0, 2.0, 1.0), 2, 2),
            Err(HlzError::TailBoundUnavailable(_))
        ));
    }
}
