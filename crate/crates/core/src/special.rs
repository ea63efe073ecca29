//! Pochhammer symbols, complex log-gamma and principal-branch powers.
//!
//! Every complex power in the crate goes through [`complex_power_neg_s`], so all
//! representations share one branch convention: the principal logarithm with
//! imaginary part in `(-π, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HlzError, Result};

/// Products up to this length are formed directly; longer ones use log-gamma.
pub const DIRECT_PRODUCT_MAX: usize = 64;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2j} / (2j (2j-1))` for `j = 1..=8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this real part the recurrence shift would be long, so reflection is used.
const REFLECTION_BELOW: f64 = -20.0;
/// Stirling's series is applied once the argument has been shifted past this.
const STIRLING_MIN_RE: f64 = 10.0;

pub fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// For a non-positive integer `c = -m`, returns `m`.
pub fn nonpositive_integer_order(c: Complex64) -> Option<usize> {
    is_nonpositive_integer(c).then(|| (-c.re) as usize)
}

/// Rising factorial `(c)_n = c (c+1) ... (c+n-1)`, with `(c)_0 = 1`.
///
/// Direct product for `n <= 64`, `exp(lnΓ(c+n) - lnΓ(c))` above. A non-positive
/// integer `c = -m` always uses the product, which is exactly zero once `n > m`.
pub fn pochhammer(c: Complex64, n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if let Some(m) = nonpositive_integer_order(c) {
        if n > m {
            return Complex64::new(0.0, 0.0);
        }
        return direct_product(c, n);
    }
    if n <= DIRECT_PRODUCT_MAX {
        return direct_product(c, n);
    }
    // Neither c nor c+n is a pole here.
    let hi = log_gamma(c + n as f64).expect("c + n is not a pole");
    let lo = log_gamma(c).expect("c is not a pole");
    (hi - lo).exp()
}

fn direct_product(c: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..n {
        acc *= c + j as f64;
    }
    acc
}

/// `∏ (num_i)_n / ∏ (den_j)_n`, formed without overflowing the individual
/// symbols. Denominators must not vanish at `n`.
pub fn pochhammer_ratio(num: &[Complex64], den: &[Complex64], n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return one;
    }
    let terminates = num
        .iter()
        .any(|&c| nonpositive_integer_order(c).is_some_and(|m| n > m));
    if terminates {
        return Complex64::new(0.0, 0.0);
    }
    let any_integer_pole = num.iter().chain(den).any(|&c| is_nonpositive_integer(c));
    if n <= DIRECT_PRODUCT_MAX || any_integer_pole {
        let mut acc = one;
        for j in 0..n {
            let jf = j as f64;
            for &c in num {
                acc *= c + jf;
            }
            for &d in den {
                acc /= d + jf;
            }
        }
        return acc;
    }
    let nf = n as f64;
    let mut log = Complex64::new(0.0, 0.0);
    for &c in num {
        log += log_gamma(c + nf).expect("not a pole") - log_gamma(c).expect("not a pole");
    }
    for &d in den {
        log -= log_gamma(d + nf).expect("not a pole") - log_gamma(d).expect("not a pole");
    }
    log.exp()
}

/// `exp(-s · Log(base))` on the principal branch.
///
/// A positive real base with real exponent goes through `powf`, which keeps
/// values such as `4^{-2}` exact.
pub fn complex_power_neg_s(base: Complex64, s: Complex64) -> Result<Complex64> {
    if base.re == 0.0 && base.im == 0.0 {
        return Err(HlzError::domain("complex power of zero base"));
    }
    if s.re == 0.0 && s.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if base.im == 0.0 && base.re > 0.0 && s.im == 0.0 {
        return Ok(Complex64::new(base.re.powf(-s.re), 0.0));
    }
    Ok((-s * base.ln()).exp())
}

/// Principal-branch `ln Γ(c)`: the analytic continuation from the positive real
/// axis with a cut along the negative real axis.
///
/// Stirling's series after an upward shift to `Re ≥ 10`; reflection for
/// `Re(c) < -20`, where the result is only determined modulo `2πi` (its
/// exponential is unaffected).
pub fn log_gamma(c: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(c) {
        return Err(HlzError::Pole(c));
    }
    if c.re < REFLECTION_BELOW {
        // Γ(c)Γ(1-c) = π / sin(πc)
        let sin = (c * PI).sin();
        let rest = log_gamma(Complex64::new(1.0, 0.0) - c)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - sin.ln() - rest);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = c;
    while w.re < STIRLING_MIN_RE {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for &coef in STIRLING.iter().rev() {
        series = series * inv2 + coef;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series * inv
}

/// `num / den` with the denominator rescaled first, so that moduli below
/// `1e-154` do not underflow in `|den|²`.
pub fn complex_div(num: Complex64, den: Complex64) -> Complex64 {
    let scale = den.re.abs().max(den.im.abs());
    if scale == 0.0 || !scale.is_finite() {
        return num / den;
    }
    (num / scale) / (den / scale)
}

/// `1/Γ(c)`, zero at the poles.
pub fn recip_gamma(c: Complex64) -> Complex64 {
    match log_gamma(c) {
        Ok(lg) => (-lg).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}
