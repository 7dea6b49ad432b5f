//! Integrals of squared solutions from Wronskians.
//!
//! For a solution family `u(x, λ)`, `W_{u,u_λ}' = −(1 − V_λ)u²`, hence
//! `∫_{x₀}^x (1 − V_λ)u² = W_{u,u_λ}(x₀) − W_{u,u_λ}(x)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jordan::{lambda_wronskian, weighted_square, ConnectionCoeffs, SolutionFamily, SumFamily};
use crate::quad::{self, Approach, LimitControl, QuadControl};

/// `∫_{x₀}^x u²` as `W_{u,u_λ}(x₀) − W_{u,u_λ}(x)`.
///
/// For energy-dependent potentials the same difference is the weighted integral
/// computed by [`integrate_u2_energy`].
pub fn integrate_u2<F: SolutionFamily + ?Sized>(family: &F, x0: f64, x: f64, lambda: f64) -> Result<f64> {
    if x == x0 {
        return Ok(0.0);
    }
    Ok(lambda_wronskian(family, x0, lambda)? - lambda_wronskian(family, x, lambda)?)
}

/// `∫_{x₀}^x (1 − V_λ) u²`, reducing exactly to [`integrate_u2`] when `V_λ ≡ 0`.
pub fn integrate_u2_energy<F: SolutionFamily + ?Sized>(
    family: &F,
    x0: f64,
    x: f64,
    lambda: f64,
) -> Result<f64> {
    integrate_u2(family, x0, x, lambda)
}

/// Adaptive-quadrature counterpart of [`integrate_u2_energy`].
pub fn quadrature_u2_energy<F: SolutionFamily + ?Sized>(
    family: &F,
    x0: f64,
    x: f64,
    lambda: f64,
    ctl: &QuadControl,
) -> Result<f64> {
    let pot = family.potential();
    quad::simpson(
        |t| Ok(weighted_square(pot, family.u(t, lambda)?, t, lambda)),
        x0,
        x,
        ctl,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    WronskianLimits,
    Quadrature,
}

/// Modified norm `N(u) = ∫ (1 − V_λ) u²` over the whole domain. It can be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub method: NormMethod,
    /// Limit of `W_{u,u_λ}` at the left endpoint (Wronskian method only).
    pub left_limit: Option<f64>,
    pub right_limit: Option<f64>,
}

impl NormResult {
    fn add(self, other: NormResult) -> NormResult {
        let sum = |a: Option<f64>, b: Option<f64>| Some(a? + b?);
        NormResult {
            value: self.value + other.value,
            method: self.method,
            left_limit: sum(self.left_limit, other.left_limit),
            right_limit: sum(self.right_limit, other.right_limit),
        }
    }
}

fn approaches(left: f64, right: f64) -> [(Approach, f64); 2] {
    let width = right - left;
    let scale = if width.is_finite() { 0.25 * width } else { 1.0 };
    let l = if left.is_finite() {
        Approach::FromRight(left)
    } else {
        Approach::MinusInfinity {
            start: right.min(0.0).abs().max(1.0),
        }
    };
    let r = if right.is_finite() {
        Approach::FromLeft(right)
    } else {
        Approach::PlusInfinity {
            start: left.max(0.0).max(1.0),
        }
    };
    [(l, scale), (r, scale)]
}

/// `N(u) = lim_{x→x_ℓ} W_{u,u_λ} − lim_{x→x_r} W_{u,u_λ}`, limits by Cauchy stability.
pub fn norm_energy<F: SolutionFamily + ?Sized>(
    family: &F,
    lambda: f64,
    ctl: &LimitControl,
) -> Result<NormResult> {
    let domain = family.potential().domain();
    let [(la, ls), (ra, rs)] = approaches(domain.left, domain.right);
    let left = quad::endpoint_limit(|x| lambda_wronskian(family, x, lambda), la, ls, ctl)?;
    let right = quad::endpoint_limit(|x| lambda_wronskian(family, x, lambda), ra, rs, ctl)?;
    Ok(NormResult {
        value: left - right,
        method: NormMethod::WronskianLimits,
        left_limit: Some(left),
        right_limit: Some(right),
    })
}

/// Norm of a complex solution `Re u + i Im u`, as the sum of the norms of both parts.
pub fn norm_energy_complex<F, G>(re: &F, im: &G, lambda: f64, ctl: &LimitControl) -> Result<NormResult>
where
    F: SolutionFamily + ?Sized,
    G: SolutionFamily + ?Sized,
{
    Ok(norm_energy(re, lambda, ctl)?.add(norm_energy(im, lambda, ctl)?))
}

/// `N(u)` by quadrature over the domain; infinite ends are truncated at `±R`
/// with `R` doubled until the value is Cauchy-stable.
pub fn norm_quadrature<F: SolutionFamily + ?Sized>(
    family: &F,
    lambda: f64,
    quad_ctl: &QuadControl,
    limit_ctl: &LimitControl,
) -> Result<NormResult> {
    let domain = family.potential().domain();
    let integral = |a: f64, b: f64| quadrature_u2_energy(family, a, b, lambda, quad_ctl);
    let value = match (domain.left.is_finite(), domain.right.is_finite()) {
        (true, true) => integral(domain.left, domain.right)?,
        (l_finite, r_finite) => {
            let mut prev: Option<f64> = None;
            let mut resolved = None;
            for k in 0..=limit_ctl.max_steps {
                let r = 2f64.powi(k as i32);
                let a = if l_finite { domain.left } else { -r };
                let b = if r_finite { domain.right } else { r };
                if a >= b {
                    continue;
                }
                let value = integral(a, b).map_err(|e| {
                    Error::LimitNotResolved(format!("quadrature to R={r} failed: {e}"))
                })?;
                if let Some(p) = prev {
                    if (value - p).abs() < limit_ctl.tol * (1.0 + value.abs()) {
                        resolved = Some(value);
                        break;
                    }
                }
                prev = Some(value);
            }
            resolved.ok_or_else(|| {
                Error::LimitNotResolved("truncated quadrature did not stabilize".into())
            })?
        }
    };
    Ok(NormResult {
        value,
        method: NormMethod::Quadrature,
        left_limit: None,
        right_limit: None,
    })
}

/// `∫_{x₀}^x [∫_{x₀}^t u₁²] u₁⁻² dt = −[(u₁)_λ(x) − d₁u₁(x) − d₂u₂(x)] / u₁(x)`,
/// with `d₁, d₂` the connection coefficients based at `x₀`.
pub fn double_integral<F, G>(
    u1: &F,
    u2: &G,
    x0: f64,
    x: f64,
    lambda: f64,
    coeffs: &ConnectionCoeffs,
) -> Result<f64>
where
    F: SolutionFamily + ?Sized,
    G: SolutionFamily + ?Sized,
{
    if x == x0 {
        return Ok(0.0);
    }
    let u = u1.u(x, lambda)?;
    if u == 0.0 {
        return Err(Error::DivisionByZero { at: x });
    }
    let rest = u1.u_lambda(x, lambda)? - coeffs.d1 * u - coeffs.d2 * u2.u(x, lambda)?;
    Ok(-rest / u)
}

/// Nested adaptive quadrature of the same double integral, for cross-checking.
pub fn double_integral_quadrature<F: SolutionFamily + ?Sized>(
    u1: &F,
    x0: f64,
    x: f64,
    lambda: f64,
    ctl: &QuadControl,
) -> Result<f64> {
    let inner_ctl = QuadControl::with_tol(ctl.abs_tol * 1e-2);
    quad::simpson(
        |t| {
            let inner = quad::simpson(|s| Ok(u1.u(s, lambda)?.powi(2)), x0, t, &inner_ctl)?;
            Ok(inner / u1.u(t, lambda)?.powi(2))
        },
        x0,
        x,
        ctl,
    )
}

/// `∫_{x₀}^x u₁u₂` by polarization:
/// `½[∫(u₁+u₂)² − ∫u₁² − ∫u₂²]`, each term from [`integrate_u2`].
pub fn cross_integral<F, G>(u1: &F, u2: &G, x0: f64, x: f64, lambda: f64) -> Result<f64>
where
    F: SolutionFamily,
    G: SolutionFamily,
{
    let sum = SumFamily { first: u1, second: u2 };
    let s = integrate_u2(&sum, x0, x, lambda)?;
    Ok(0.5 * (s - integrate_u2(u1, x0, x, lambda)? - integrate_u2(u2, x0, x, lambda)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::connection_coeffs;
    use crate::models::{box_eigenfunction, box_eigenvalue, BoxCosine, BoxSine, EdhoFamily, RadialOscillator};
    use crate::quad::LimitControl;
    use std::f64::consts::PI;

    #[test]
    fn box_integrals_match_closed_forms() {
        let lambda = PI * PI;
        assert!((integrate_u2(&BoxSine::unit(), 0.0, 1.0, lambda).unwrap() - 0.5).abs() < 1e-14);
        let k = lambda.sqrt();
        for &x in &[0.2, 0.5, 0.9] {
            let i1 = integrate_u2(&BoxSine::unit(), 0.0, x, lambda).unwrap();
            assert!((i1 - (x / 2.0 - (2.0 * k * x).sin() / (4.0 * k))).abs() < 1e-14);
            let i2 = integrate_u2(&BoxCosine, 0.0, x, lambda).unwrap();
            let expected = x / (2.0 * lambda) + (2.0 * k * x).sin() / (4.0 * lambda.powf(1.5));
            assert!((i2 - expected).abs() < 1e-14);
        }
        assert_eq!(integrate_u2(&BoxSine::unit(), 0.3, 0.3, lambda).unwrap(), 0.0);
    }

    #[test]
    fn edho_weighted_integral_and_norm() {
        let fam = EdhoFamily::default();
        let ctl = QuadControl::with_tol(1e-12);
        let w = integrate_u2_energy(&fam, -6.0, 6.0, 1.0).unwrap();
        let q = quad::simpson(|x| Ok((1.0 - x * x) * (-x * x).exp()), -6.0, 6.0, &ctl).unwrap();
        assert!((w - q).abs() < 1e-8, "{w} vs {q}");
        let target = PI.sqrt() / 2.0;
        let n = norm_energy(&fam, 1.0, &LimitControl::default()).unwrap();
        assert!((n.value - target).abs() < 1e-7);
        assert!((n.left_limit.unwrap() - target).abs() < 1e-7);
        assert!(n.right_limit.unwrap().abs() < 1e-7);
        assert_eq!(n.value, n.left_limit.unwrap() - n.right_limit.unwrap());
        let nq = norm_quadrature(&fam, 1.0, &ctl, &LimitControl::default()).unwrap();
        assert!((nq.value - target).abs() < 1e-7);
    }

    #[test]
    fn box_norm_fixes_amplitude() {
        let n = norm_energy(&BoxSine::unit(), PI * PI, &LimitControl::default()).unwrap();
        assert!((n.value - 0.5).abs() < 1e-12);
        let a = (1.0 / n.value).sqrt();
        assert!((a - 2f64.sqrt()).abs() < 1e-12);
        let psi = box_eigenfunction();
        for m in 1..4 {
            let n = norm_energy(&psi, box_eigenvalue(m), &LimitControl::default()).unwrap();
            assert!((n.value - 1.0).abs() < 1e-12);
        }
        let q = norm_quadrature(&BoxSine::unit(), PI * PI, &QuadControl::default(), &LimitControl::default())
            .unwrap();
        assert!((q.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn complex_norm_adds_parts() {
        let lambda = PI * PI;
        let n = norm_energy_complex(&BoxSine::unit(), &BoxSine { amplitude: 2.0 }, lambda, &LimitControl::default())
            .unwrap();
        assert!((n.value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn double_integral_box() {
        let lambda = PI * PI;
        let k = PI;
        let (x0, x) = (0.3, 0.7);
        let c = connection_coeffs(&BoxSine::unit(), &BoxCosine, x0, lambda).unwrap();
        let d = double_integral(&BoxSine::unit(), &BoxCosine, x0, x, lambda, &c).unwrap();
        let closed = (k * x0).cos().powi(2) / (2.0 * lambda)
            - ((x - x0) / (2.0 * k) + (2.0 * k * x0).sin() / (4.0 * lambda)) / (k * x).tan();
        assert!((d - closed).abs() < 1e-8, "{d} vs {closed}");
        let q = double_integral_quadrature(&BoxSine::unit(), x0, x, lambda, &QuadControl::with_tol(1e-10))
            .unwrap();
        assert!((d - q).abs() < 1e-7);
        assert_eq!(double_integral(&BoxSine::unit(), &BoxCosine, x0, x0, lambda, &c).unwrap(), 0.0);
    }

    #[test]
    fn cross_integrals() {
        let lambda: f64 = 5.3;
        let k = lambda.sqrt();
        let (x0, x) = (0.1, 0.8);
        let c = cross_integral(&BoxSine::unit(), &BoxCosine, x0, x, lambda).unwrap();
        // ∫ sin(kt)·(−cos(kt)/k) dt = cos(2kt)/(4λ)
        let expected = ((2.0 * k * x).cos() - (2.0 * k * x0).cos()) / (4.0 * lambda);
        assert!((c - expected).abs() < 1e-13);
        let same = cross_integral(&BoxSine::unit(), &BoxSine::unit(), x0, x, lambda).unwrap();
        let plain = integrate_u2(&BoxSine::unit(), x0, x, lambda).unwrap();
        assert!((same - plain).abs() < 1e-14);

        let model = RadialOscillator::new(1);
        let (u1, u2) = (model.u1(), model.u2());
        let c = cross_integral(&u1, &u2, 0.5, 2.0, 8.0).unwrap();
        let q = quad::simpson(
            |t| Ok(u1.u(t, 8.0)? * u2.u(t, 8.0)?),
            0.5,
            2.0,
            &QuadControl::with_tol(1e-12),
        )
        .unwrap();
        assert!((c - q).abs() < 1e-6, "{c} vs {q}");
    }

    #[test]
    fn reduction_is_bit_identical() {
        let fam = BoxSine::unit();
        let ctl = QuadControl::default();
        for &(a, b) in &[(0.1, 0.4), (0.0, 1.0)] {
            let plain = integrate_u2(&fam, a, b, 7.0).unwrap();
            let energy = integrate_u2_energy(&fam, a, b, 7.0).unwrap();
            assert_eq!(plain.to_bits(), energy.to_bits());
            let weighted = quadrature_u2_energy(&fam, a, b, 7.0, &ctl).unwrap();
            let squared = quad::simpson(|t| Ok(fam.u(t, 7.0)?.powi(2)), a, b, &ctl).unwrap();
            assert_eq!(weighted.to_bits(), squared.to_bits());
        }
    }
}
