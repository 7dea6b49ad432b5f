//! Special functions for the closed-form models: Kummer's ₁F₁ and its
//! derivative in the first parameter, the Pochhammer symbol, Gamma, and
//! Hermite functions of real order.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Stopping rule for the power series in this module.
///
/// A series stops once two consecutive terms are below `rel_tol` times the
/// running sum (and the terms have started to shrink), and fails with
/// [`Error::NonConvergence`] after `max_terms`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-15,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidInput(format!(
                "series control needs rel_tol > 0 and max_terms >= 1, got {rel_tol}, {max_terms}"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// Rising factorial `(q)ₘ = q(q+1)…(q+m−1)`, with `(q)₀ = 1`.
pub fn pochhammer(q: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (q + k as f64))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function by the Lanczos approximation (g = 7, nine coefficients),
/// using the reflection formula below 1/2.
///
/// Returns `±∞` at the poles `0, −1, −2, …`.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Reciprocal Gamma function, exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

// Terms may only be declared negligible once they are shrinking for good.
fn in_tail(m: usize, a: f64, b: f64, ratio: f64) -> bool {
    let m = m as f64;
    m >= a.abs() && m >= b.abs() && ratio.abs() < 1.0
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; x) = Σ (a)ₘ/(b)ₘ xᵐ/m!`.
///
/// The series is summed directly; when `a` is a non-positive integer it
/// terminates and the result is the exact polynomial.
pub fn hyp1f1(a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for m in 0..ctl.max_terms {
        let mf = m as f64;
        if a + mf == 0.0 {
            return Ok(sum);
        }
        if b + mf == 0.0 {
            return Err(Error::Pole(format!(
                "1F1 lower parameter b={b} reaches zero at term {}",
                m + 1
            )));
        }
        let ratio = (a + mf) / (b + mf) * x / (mf + 1.0);
        term *= ratio;
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow(format!("1F1({a}; {b}; {x}) overflows")));
        }
        if term.abs() <= ctl.rel_tol * sum.abs() && in_tail(m + 1, a, b, ratio) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        a,
        b,
        x,
        max_terms: ctl.max_terms,
    })
}

/// Derivative of `₁F₁(a; b; x)` with respect to `a`:
/// `Σₘ (a)ₘ/(b)ₘ · xᵐ/m! · Σ_{p=0}^{m−1} 1/(p+a)`.
///
/// The product `(a)ₘ · Σ 1/(p+a)` is carried incrementally as `∂ₐ(a)ₘ` through
/// `∂ₐ(a)ₘ₊₁ = (a+m) ∂ₐ(a)ₘ + (a)ₘ`, which stays finite when `a` is a
/// non-positive integer (the function is entire in `a`).
pub fn hyp1f1_da(a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut term = 1.0;
    let mut dterm = 0.0;
    let mut sum = 0.0;
    let mut small = 0;
    for m in 0..ctl.max_terms {
        let mf = m as f64;
        if b + mf == 0.0 {
            return Err(Error::Pole(format!(
                "1F1 lower parameter b={b} reaches zero at term {}",
                m + 1
            )));
        }
        let step = x / ((b + mf) * (mf + 1.0));
        dterm = (dterm * (a + mf) + term) * step;
        term *= (a + mf) * step;
        sum += dterm;
        if !sum.is_finite() {
            return Err(Error::Overflow(format!(
                "d/da 1F1({a}; {b}; {x}) overflows"
            )));
        }
        let ratio = (a + mf + 1.0) * step;
        if dterm.abs() <= ctl.rel_tol * sum.abs() && in_tail(m + 1, a, b, ratio) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        a,
        b,
        x,
        max_terms: ctl.max_terms,
    })
}

/// Largest `|x|` accepted by the real-order branch of [`hermite`]; `e^{x²}` stays finite.
pub const HERMITE_MAX_ABS_X: f64 = 25.0;
/// Largest `|ν|` accepted by [`hermite`].
pub const HERMITE_MAX_ABS_ORDER: f64 = 50.0;

/// Default step for finite differences in the Hermite order.
pub const DEFAULT_ORDER_STEP: f64 = 1e-5;

/// Hermite function `H_ν(x)` of real order.
///
/// Non-negative integer orders use the three-term recurrence and give the
/// physicists' polynomials exactly. Other orders use
///
/// `H_ν(x) = 2^ν √π [ ₁F₁(−ν/2; 1/2; x²)/Γ((1−ν)/2) − 2x ₁F₁((1−ν)/2; 3/2; x²)/Γ(−ν/2) ]`.
///
/// For `ν = −1` this reduces to `H₋₁(x) = (√π/2) e^{x²} erfc(x)`; the unit tests
/// check that identity against an independent `erfc`. The real-order branch is
/// limited to `|x| ≤ 25` and `|ν| ≤ 50`, beyond which [`Error::Overflow`] is returned.
pub fn hermite(nu: f64, x: f64) -> Result<f64> {
    hermite_with(nu, x, &SeriesControl::default())
}

pub fn hermite_with(nu: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(Error::InvalidInput(format!("hermite({nu}, {x})")));
    }
    if nu.abs() > HERMITE_MAX_ABS_ORDER {
        return Err(Error::Overflow(format!("Hermite order {nu} out of range")));
    }
    if nu >= 0.0 && nu == nu.floor() {
        return Ok(hermite_polynomial(nu as u32, x));
    }
    if x.abs() > HERMITE_MAX_ABS_X {
        return Err(Error::Overflow(format!(
            "real-order Hermite argument {x} out of range"
        )));
    }
    let y = x * x;
    let r_even = rgamma(0.5 * (1.0 - nu));
    let r_odd = rgamma(-0.5 * nu);
    let even = if r_even == 0.0 {
        0.0
    } else {
        hyp1f1(-0.5 * nu, 0.5, y, ctl)? * r_even
    };
    let odd = if r_odd == 0.0 {
        0.0
    } else {
        2.0 * x * hyp1f1(0.5 * (1.0 - nu), 1.5, y, ctl)? * r_odd
    };
    let value = 2f64.powf(nu) * PI.sqrt() * (even - odd);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("H_{nu}({x}) overflows")))
    }
}

fn hermite_polynomial(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Central difference `[H_{ν+h}(x) − H_{ν−h}(x)] / 2h` in the order.
pub fn dhermite_dnu(nu: f64, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("order step must be positive, got {h}")));
    }
    Ok((hermite(nu + h, x)? - hermite(nu - h, x)?) / (2.0 * h))
}
