//! Adaptive Simpson quadrature and endpoint-limit helpers.

use crate::error::{Error, Result};

/// Tolerances for [`simpson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Total number of interval bisections allowed before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 1 << 20,
        }
    }
}

impl QuadControl {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }
}

const INITIAL_PANELS: usize = 8;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson integration of `f` over `[a, b]` (or `-∫_b^a` when `b < a`).
///
/// The target accuracy is `max(abs_tol, rel_tol * S)` where `S` is the integral of
/// `|f|` estimated on the initial panels, distributed over panels by width.
pub fn simpson<F>(mut f: F, a: f64, b: f64, ctl: &QuadControl) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return simpson(f, b, a, ctl).map(|v| -v);
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "quadrature bounds must be finite, got [{a}, {b}]"
        )));
    }

    let width = b - a;
    let mut stack = Vec::with_capacity(64);
    let mut f_left = checked(f(a)?, a)?;
    let mut scale = 0.0;
    for i in 0..INITIAL_PANELS {
        let pa = a + width * i as f64 / INITIAL_PANELS as f64;
        let pb = if i + 1 == INITIAL_PANELS {
            b
        } else {
            a + width * (i + 1) as f64 / INITIAL_PANELS as f64
        };
        let pm = 0.5 * (pa + pb);
        let fm = checked(f(pm)?, pm)?;
        let fb = checked(f(pb)?, pb)?;
        let whole = simpson_rule(pa, pb, f_left, fm, fb);
        scale += (pb - pa) / 6.0 * (f_left.abs() + 4.0 * fm.abs() + fb.abs());
        stack.push(Panel {
            a: pa,
            b: pb,
            fa: f_left,
            fm,
            fb,
            whole,
            tol: 0.0,
            depth: 0,
        });
        f_left = fb;
    }
    let target = ctl.abs_tol.max(ctl.rel_tol * scale);
    for p in stack.iter_mut() {
        p.tol = target * (p.b - p.a) / width;
    }

    let mut total = 0.0;
    let mut compensation = 0.0;
    let mut subdivisions = 0usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = checked(f(lm)?, lm)?;
        let frm = checked(f(rm)?, rm)?;
        let left = simpson_rule(p.a, m, p.fa, flm, p.fm);
        let right = simpson_rule(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        let tiny = m - p.a <= f64::EPSILON * m.abs().max(1e-300);
        if (p.depth >= 1 && delta.abs() <= 15.0 * p.tol) || tiny {
            // Kahan summation keeps the accumulated roundoff below the panel tolerances.
            let y = left + right + delta / 15.0 - compensation;
            let t = total + y;
            compensation = (t - total) - y;
            total = t;
            continue;
        }
        subdivisions += 1;
        if subdivisions > ctl.max_subdivisions {
            return Err(Error::QuadFailure { a, b });
        }
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol: 0.5 * p.tol,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol: 0.5 * p.tol,
            depth: p.depth + 1,
        });
    }
    Ok(total)
}

fn checked(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::SingularIntegrand { at: x })
    }
}

// Eight-point Gauss-Legendre rule on [-1, 1].
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Fixed eight-point Gauss-Legendre rule on `[a, b]`. Smooth in both bounds,
/// which keeps it usable inside an outer adaptive rule.
pub fn gauss_legendre8<F>(mut f: F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        let l = mid - half * x;
        let r = mid + half * x;
        acc += w * (checked(f(l)?, l)? + checked(f(r)?, r)?);
    }
    Ok(acc * half)
}

/// Verify that `u` keeps a strict sign on `[a, b]` by sampling `nodes + 1` points.
///
/// Fails on a sign change between adjacent nodes or when `|u|` drops below
/// `1e-12` times the largest sampled magnitude.
pub fn ensure_zero_free<F>(mut u: F, a: f64, b: f64, nodes: usize) -> Result<()>
where
    F: FnMut(f64) -> Result<f64>,
{
    let nodes = nodes.max(2);
    let mut samples = Vec::with_capacity(nodes + 1);
    for i in 0..=nodes {
        let x = a + (b - a) * i as f64 / nodes as f64;
        samples.push((x, u(x)?));
    }
    let scale = samples.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    for (i, &(x, v)) in samples.iter().enumerate() {
        if !v.is_finite() || v.abs() <= 1e-12 * scale || scale == 0.0 {
            return Err(Error::SingularIntegrand { at: x });
        }
        if i > 0 && samples[i - 1].1.signum() != v.signum() {
            return Err(Error::SingularIntegrand {
                at: 0.5 * (samples[i - 1].0 + x),
            });
        }
    }
    Ok(())
}

/// Settings for numerically resolving the limit of a function at an endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitControl {
    /// Successive evaluations must differ by less than `tol * (1 + |value|)`.
    pub tol: f64,
    /// Maximum number of halvings (finite endpoint) or doublings (infinite endpoint).
    pub max_steps: u32,
}

impl Default for LimitControl {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_steps: 40,
        }
    }
}

/// Endpoint of an open interval approached from the inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Approach {
    /// Finite left endpoint `e`, approached through `e + δ`.
    FromRight(f64),
    /// Finite right endpoint `e`, approached through `e - δ`.
    FromLeft(f64),
    /// `+∞`, approached through `start · 2ᵏ` with `start > 0`.
    PlusInfinity { start: f64 },
    /// `-∞`, approached through `-start · 2ᵏ` with `start > 0`.
    MinusInfinity { start: f64 },
}

impl Approach {
    /// Sample point for step `k`; `scale` is the initial offset for finite endpoints.
    pub fn point(&self, k: u32, scale: f64) -> f64 {
        let factor = 2f64.powi(k as i32);
        match *self {
            Approach::FromRight(e) => e + scale / factor,
            Approach::FromLeft(e) => e - scale / factor,
            Approach::PlusInfinity { start } => start * factor,
            Approach::MinusInfinity { start } => -start * factor,
        }
    }
}

/// Cauchy-stability limit: evaluate `f` along the approach sequence until two
/// successive values agree within `ctl.tol`.
///
/// Evaluation errors or non-finite values end the sequence and are reported as
/// [`Error::LimitNotResolved`].
pub fn cauchy_limit<F>(mut f: F, approach: Approach, scale: f64, ctl: &LimitControl) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev: Option<f64> = None;
    for k in 0..=ctl.max_steps {
        let x = approach.point(k, scale);
        let value = match f(x) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                return Err(Error::LimitNotResolved(format!(
                    "non-finite value {v} at x={x}"
                )))
            }
            Err(e) => {
                return Err(Error::LimitNotResolved(format!(
                    "evaluation failed at x={x}: {e}"
                )))
            }
        };
        if let Some(p) = prev {
            if (value - p).abs() < ctl.tol * (1.0 + value.abs()) {
                return Ok(value);
            }
        }
        prev = Some(value);
    }
    Err(Error::LimitNotResolved(format!(
        "sequence along {approach:?} not Cauchy-stable after {} steps",
        ctl.max_steps
    )))
}

/// [`cauchy_limit`], followed by a direct evaluation at a finite endpoint: when `f` is
/// defined there and agrees with the resolved limit, the endpoint value is returned.
pub fn endpoint_limit<F>(mut f: F, approach: Approach, scale: f64, ctl: &LimitControl) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let limit = cauchy_limit(&mut f, approach, scale, ctl)?;
    let end = match approach {
        Approach::FromRight(e) | Approach::FromLeft(e) => e,
        _ => return Ok(limit),
    };
    match f(end) {
        Ok(v) if v.is_finite() && (v - limit).abs() < 10.0 * ctl.tol * (1.0 + limit.abs()) => Ok(v),
        _ => Ok(limit),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = simpson(|x| Ok(x * x * x - 2.0 * x), 0.0, 2.0, &QuadControl::default()).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
        let v = simpson(|x| Ok(x * x), 1.0, 4.0, &QuadControl::default()).unwrap();
        assert!((v - 21.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let ctl = QuadControl::default();
        let fwd = simpson(|x| Ok(x.sin()), 0.0, 1.0, &ctl).unwrap();
        let back = simpson(|x| Ok(x.sin()), 1.0, 0.0, &ctl).unwrap();
        assert_eq!(fwd, -back);
        assert!((fwd - (1.0 - 1f64.cos())).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = simpson(|x| Ok((20.0 * x).sin().powi(2)), 0.0, PI, &QuadControl::default()).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn singular_integrand_is_reported() {
        let err = simpson(|x: f64| Ok(1.0 / x), 0.0, 1.0, &QuadControl::default()).unwrap_err();
        assert!(matches!(err, Error::SingularIntegrand { .. }));
    }

    #[test]
    fn budget_exhaustion() {
        let ctl = QuadControl {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_subdivisions: 4,
        };
        let err = simpson(|x: f64| Ok(x.sqrt()), 0.0, 1.0, &ctl).unwrap_err();
        assert!(matches!(err, Error::QuadFailure { .. }));
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_15() {
        let v = gauss_legendre8(|x| Ok(x.powi(15) + x.powi(14)), -1.0, 1.0).unwrap();
        assert!((v - 2.0 / 15.0).abs() < 1e-15);
        let v = gauss_legendre8(|x| Ok(x.exp()), 0.0, 0.1).unwrap();
        assert!((v - (0.1f64.exp() - 1.0)).abs() < 1e-16);
    }

    #[test]
    fn zero_detection() {
        assert!(ensure_zero_free(|x| Ok(x.sin()), 0.1, 3.0, 64).is_ok());
        let err = ensure_zero_free(|x| Ok(x.sin()), 0.1, 3.5, 64).unwrap_err();
        match err {
            Error::SingularIntegrand { at } => assert!((at - PI).abs() < 0.1),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn limits_at_finite_and_infinite_endpoints() {
        let ctl = LimitControl::default();
        let l = cauchy_limit(|x| Ok(x.sin() / x), Approach::FromRight(0.0), 0.1, &ctl).unwrap();
        assert!((l - 1.0).abs() < 1e-9);
        let l = cauchy_limit(|x| Ok((-x * x).exp()), Approach::PlusInfinity { start: 1.0 }, 1.0, &ctl)
            .unwrap();
        assert!(l.abs() < 1e-9);
        let err = cauchy_limit(|x| Ok(x), Approach::PlusInfinity { start: 1.0 }, 1.0, &ctl).unwrap_err();
        assert!(matches!(err, Error::LimitNotResolved(_)));
    }
}
