//! Confluent SUSY transformation built from a Jordan chain at one factorization energy λ.
//!
//! The transformation is controlled by the Wronskian `W = W_{u,v}`, written either as
//! `K + W_{u,u_λ}(x)` (differential form) or `ω₀ − ∫_{x₀}^x u²` (integral form). In both
//! forms `W' = −u²`, so `W` is non-increasing and the partner potential
//! `Ṽ = V − 2(log W)''` is regular exactly when `W` keeps one sign on the domain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::jordan::{lambda_wronskian, SolutionFamily};
use crate::numdiff;
use crate::quad::{self, Approach, LimitControl, QuadControl};

/// Which representation of `W_{u,v}` a transform uses, with its free constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SusyRepresentation {
    /// `W = K + W_{u,u_λ}(x)`.
    Differential { k: f64 },
    /// `W = ω₀ − ∫_{x₀}^x u²`.
    Integral { x0: f64, omega0: f64 },
}

impl SusyRepresentation {
    pub fn free_constant(&self) -> f64 {
        match *self {
            SusyRepresentation::Differential { k } => k,
            SusyRepresentation::Integral { omega0, .. } => omega0,
        }
    }
}

/// A confluent transformation of an energy-independent potential.
pub struct SusyTransform<F> {
    pub family: F,
    pub lambda: f64,
    pub representation: SusyRepresentation,
    pub quad: QuadControl,
    pub limits: LimitControl,
}

/// `|W| ≤ 1e-12 · (1 + |C|)` counts as a zero, `C` being `K` or `ω₀`.
pub const WRONSKIAN_ZERO_FACTOR: f64 = 1e-12;

/// Stencil step for [`SusyTransform::state_residual`], relative to `max(1, |x|)`.
pub const STATE_RESIDUAL_STEP: f64 = 1e-4;

impl<F: SolutionFamily> SusyTransform<F> {
    pub fn new(family: F, lambda: f64, representation: SusyRepresentation) -> Result<Self> {
        if !family.potential().is_energy_independent() {
            return Err(Error::InvalidInput(
                "confluent transformations need an energy-independent potential".into(),
            ));
        }
        Ok(Self {
            family,
            lambda,
            representation,
            quad: QuadControl::default(),
            limits: LimitControl::default(),
        })
    }

    pub fn differential(family: F, lambda: f64, k: f64) -> Result<Self> {
        Self::new(family, lambda, SusyRepresentation::Differential { k })
    }

    pub fn integral(family: F, lambda: f64, x0: f64, omega0: f64) -> Result<Self> {
        Self::new(family, lambda, SusyRepresentation::Integral { x0, omega0 })
    }

    pub fn with_quad(mut self, quad: QuadControl) -> Self {
        self.quad = quad;
        self
    }

    pub fn zero_threshold(&self) -> f64 {
        WRONSKIAN_ZERO_FACTOR * (1.0 + self.representation.free_constant().abs())
    }

    /// `W_{u,v}(x)` in the active representation.
    pub fn wronskian(&self, x: f64) -> Result<f64> {
        match self.representation {
            SusyRepresentation::Differential { k } => {
                Ok(k + lambda_wronskian(&self.family, x, self.lambda)?)
            }
            SusyRepresentation::Integral { x0, omega0 } => {
                Ok(omega0 - self.integral_of_square(x0, x)?)
            }
        }
    }

    /// `∫_a^b u²` by adaptive quadrature.
    pub fn integral_of_square(&self, a: f64, b: f64) -> Result<f64> {
        quad::simpson(
            |t| Ok(self.family.u(t, self.lambda)?.powi(2)),
            a,
            b,
            &self.quad,
        )
    }

    fn nonzero_wronskian(&self, x: f64) -> Result<f64> {
        let w = self.wronskian(x)?;
        if w.abs() <= self.zero_threshold() {
            return Err(Error::WronskianZero { at: x, value: w.abs() });
        }
        Ok(w)
    }

    /// `Ṽ = V + [4 u u_x W + 2u⁴] / W²`.
    pub fn partner_potential(&self, x: f64) -> Result<f64> {
        let w = self.nonzero_wronskian(x)?;
        let u = self.family.u(x, self.lambda)?;
        let u_x = self.family.u_x(x, self.lambda)?;
        let v = self.family.potential().value(x, self.lambda);
        Ok(v + (4.0 * u * u_x * w + 2.0 * u.powi(4)) / (w * w))
    }

    /// Transformed state `φ` of a solution `ψ` at energy `ε`:
    /// `u²ψ_x/W + (λ − ε − u u_x/W) ψ`, or `u/W` when `ε = λ`.
    pub fn transform_state<S: SolutionFamily + ?Sized>(&self, psi: &S, eps: f64, x: f64) -> Result<f64> {
        Ok(self.transform_state_with_derivative(psi, eps, x)?.0)
    }

    /// `(φ, φ_x)`, with `φ_x` obtained analytically from `W' = −u²` and the equations for `u` and `ψ`.
    pub fn transform_state_with_derivative<S: SolutionFamily + ?Sized>(
        &self,
        psi: &S,
        eps: f64,
        x: f64,
    ) -> Result<(f64, f64)> {
        let w = self.nonzero_wronskian(x)?;
        let lambda = self.lambda;
        let u = self.family.u(x, lambda)?;
        let u_x = self.family.u_x(x, lambda)?;
        let v = self.family.potential().value(x, lambda);
        if is_factorization_energy(eps, lambda) {
            return Ok((u / w, u_x / w + u.powi(3) / (w * w)));
        }
        let p = psi.u(x, eps)?;
        let p_x = psi.u_x(x, eps)?;
        let p_xx = (v - eps) * p;
        let u_xx = (v - lambda) * u;
        let a = u * u / w;
        let a_x = 2.0 * u * u_x / w + u.powi(4) / (w * w);
        let b = lambda - eps - u * u_x / w;
        let b_x = -(u_x * u_x + u * u_xx) / w - u.powi(3) * u_x / (w * w);
        Ok((a * p_x + b * p, a_x * p_x + a * p_xx + b_x * p + b * p_x))
    }

    /// `|φ_xx + (ε − Ṽ)φ|`, with `φ_xx` a five-point difference of the analytic `φ_x`.
    pub fn state_residual<S: SolutionFamily + ?Sized>(&self, psi: &S, eps: f64, x: f64) -> Result<f64> {
        let h = STATE_RESIDUAL_STEP * x.abs().max(1.0);
        let phi = self.transform_state(psi, eps, x)?;
        let phi_xx = numdiff::first_derivative(
            |s| Ok(self.transform_state_with_derivative(psi, eps, s)?.1),
            x,
            h,
        )?;
        Ok((phi_xx + (eps - self.partner_potential(x)?) * phi).abs())
    }

    /// Endpoint limits of `W_{u,u_λ}` and the admissible ranges of the free constants.
    pub fn regularity_range(&self) -> Result<RegularityReport> {
        let domain = self.family.potential().domain();
        let left = self.endpoint(Side::Left, domain.left, domain.right)?;
        let right = self.endpoint(Side::Right, domain.left, domain.right)?;
        let admissible_k = RaySet {
            upper_limit_of_lower_ray: left.finite.then_some(-left.lambda_wronskian),
            lower_limit_of_upper_ray: right.finite.then_some(-right.lambda_wronskian),
        };
        let admissible_omega0 = match self.representation {
            SusyRepresentation::Integral { x0, .. } => {
                let i_left = if left.finite {
                    Some(self.square_integral_to(x0, Side::Left, domain.left)?)
                } else {
                    None
                };
                let i_right = if right.finite {
                    Some(self.square_integral_to(x0, Side::Right, domain.right)?)
                } else {
                    None
                };
                Some(RaySet {
                    upper_limit_of_lower_ray: i_left.map(|i| -i),
                    lower_limit_of_upper_ray: i_right,
                })
            }
            SusyRepresentation::Differential { .. } => None,
        };
        let boundary_class = match (left.vanishes, right.vanishes) {
            (true, true) => BoundaryClass::Both,
            (true, false) => BoundaryClass::VanishesLeft,
            (false, true) => BoundaryClass::VanishesRight,
            (false, false) => BoundaryClass::Neither,
        };
        Ok(RegularityReport {
            w_left: left.lambda_wronskian,
            w_right: right.lambda_wronskian,
            admissible_k,
            admissible_omega0,
            boundary_class,
        })
    }

    fn approach(&self, side: Side, left: f64, right: f64) -> (Approach, f64) {
        let width = right - left;
        let scale = if width.is_finite() { 0.25 * width } else { 1.0 };
        match side {
            Side::Left if left.is_finite() => (Approach::FromRight(left), scale),
            Side::Left => (Approach::MinusInfinity { start: right.min(0.0).abs().max(1.0) }, scale),
            Side::Right if right.is_finite() => (Approach::FromLeft(right), scale),
            Side::Right => (Approach::PlusInfinity { start: left.max(0.0).max(1.0) }, scale),
        }
    }

    fn endpoint(&self, side: Side, left: f64, right: f64) -> Result<Endpoint> {
        let (approach, scale) = self.approach(side, left, right);
        let u_limit = quad::endpoint_limit(|x| self.family.u(x, self.lambda), approach, scale, &self.limits);
        let outward = match side {
            Side::Left => f64::INFINITY,
            Side::Right => f64::NEG_INFINITY,
        };
        match u_limit {
            Err(_) => Ok(Endpoint {
                lambda_wronskian: outward,
                finite: false,
                vanishes: false,
            }),
            Ok(u) => {
                let w = quad::endpoint_limit(
                    |x| lambda_wronskian(&self.family, x, self.lambda),
                    approach,
                    scale,
                    &self.limits,
                )?;
                Ok(Endpoint {
                    lambda_wronskian: w,
                    finite: true,
                    vanishes: u.abs() <= self.limits.tol,
                })
            }
        }
    }

    // ∫ u² between x0 and the endpoint on `side`.
    fn square_integral_to(&self, x0: f64, side: Side, end: f64) -> Result<f64> {
        let domain = self.family.potential().domain();
        let (approach, scale) = self.approach(side, domain.left, domain.right);
        let value = if end.is_finite() {
            self.integral_of_square(x0, end)?
        } else {
            quad::cauchy_limit(
                |r| self.integral_of_square(x0, r),
                approach,
                scale,
                &self.limits,
            )?
        };
        Ok(value.abs())
    }

    /// Sign analysis of `W` on the open domain, refined by samples on `grid`.
    ///
    /// `W` is non-increasing, so a zero exists iff the left limit is positive and the right
    /// limit negative (both beyond the zero threshold); a zero is then bracketed on the
    /// grid and located by bisection. Unresolvable limits are reported as irregular.
    pub fn check_regular(&self, grid: &GridSpec) -> RegularityCheck {
        let tol = self.zero_threshold();
        let (w_left, w_right) = match self.w_endpoints() {
            Ok(pair) => pair,
            Err(_) => {
                return RegularityCheck {
                    regular: false,
                    zero: None,
                    w_left: f64::NAN,
                    w_right: f64::NAN,
                }
            }
        };
        let samples: Vec<(f64, Result<f64>)> =
            grid.points().map(|x| (x, self.wronskian(x))).collect();
        let mut prev: Option<(f64, f64)> = None;
        let mut bracket = None;
        let mut sample_failed = false;
        for (x, w) in samples {
            let Ok(w) = w else {
                sample_failed = true;
                continue;
            };
            if let Some((px, pw)) = prev {
                if pw > tol && w < -tol {
                    bracket = Some((px, x));
                    break;
                }
            }
            if w.abs() <= tol && self.family.potential().domain().contains(x) && w_left > tol && w_right < -tol {
                bracket = Some((x, x));
                break;
            }
            prev = Some((x, w));
        }
        let sign_change = w_left > tol && w_right < -tol;
        let regular = !sign_change && bracket.is_none() && !sample_failed;
        let zero = if regular {
            None
        } else {
            let br = bracket.or_else(|| self.bracket_from_domain());
            br.and_then(|(a, b)| self.bisect(a, b).ok())
        };
        RegularityCheck {
            regular,
            zero,
            w_left,
            w_right,
        }
    }

    fn w_endpoints(&self) -> Result<(f64, f64)> {
        let domain = self.family.potential().domain();
        let left = self.endpoint(Side::Left, domain.left, domain.right)?;
        let right = self.endpoint(Side::Right, domain.left, domain.right)?;
        Ok(match self.representation {
            SusyRepresentation::Differential { k } => {
                (k + left.lambda_wronskian, k + right.lambda_wronskian)
            }
            SusyRepresentation::Integral { x0, omega0 } => {
                let wl = if left.finite {
                    omega0 + self.square_integral_to(x0, Side::Left, domain.left)?
                } else {
                    f64::INFINITY
                };
                let wr = if right.finite {
                    omega0 - self.square_integral_to(x0, Side::Right, domain.right)?
                } else {
                    f64::NEG_INFINITY
                };
                (wl, wr)
            }
        })
    }

    // Walk inward from both ends to find points where W has opposite signs.
    fn bracket_from_domain(&self) -> Option<(f64, f64)> {
        let domain = self.family.potential().domain();
        let (la, ls) = self.approach(Side::Left, domain.left, domain.right);
        let (ra, rs) = self.approach(Side::Right, domain.left, domain.right);
        let tol = self.zero_threshold();
        let a = (0..self.limits.max_steps)
            .map(|k| la.point(k, ls))
            .find(|&x| self.wronskian(x).map_or(false, |w| w > tol))?;
        let b = (0..self.limits.max_steps)
            .map(|k| ra.point(k, rs))
            .find(|&x| self.wronskian(x).map_or(false, |w| w < -tol))?;
        (a < b).then_some((a, b))
    }

    fn bisect(&self, mut a: f64, mut b: f64) -> Result<f64> {
        if a == b {
            return Ok(a);
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.wronskian(m)? > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        Ok(0.5 * (a + b))
    }
}

fn is_factorization_energy(eps: f64, lambda: f64) -> bool {
    (eps - lambda).abs() <= 1e-12 * lambda.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

struct Endpoint {
    lambda_wronskian: f64,
    // u stays bounded at this end
    finite: bool,
    vanishes: bool,
}

/// `K + W_{u,u_λ}(x)`; fails unless the transform uses the differential form.
pub fn wronskian_df<F: SolutionFamily>(transform: &SusyTransform<F>, x: f64) -> Result<f64> {
    match transform.representation {
        SusyRepresentation::Differential { .. } => transform.wronskian(x),
        _ => Err(Error::InvalidInput("transform uses the integral representation".into())),
    }
}

/// `ω₀ − ∫_{x₀}^x u²`; fails unless the transform uses the integral form.
pub fn wronskian_vc<F: SolutionFamily>(transform: &SusyTransform<F>, x: f64) -> Result<f64> {
    match transform.representation {
        SusyRepresentation::Integral { .. } => transform.wronskian(x),
        _ => Err(Error::InvalidInput("transform uses the differential representation".into())),
    }
}

/// Union of at most two closed rays `(−∞, a] ∪ [b, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RaySet {
    pub upper_limit_of_lower_ray: Option<f64>,
    pub lower_limit_of_upper_ray: Option<f64>,
}

impl RaySet {
    pub fn contains(&self, c: f64) -> bool {
        self.upper_limit_of_lower_ray.map_or(false, |a| c <= a)
            || self.lower_limit_of_upper_ray.map_or(false, |b| c >= b)
    }

    pub fn is_empty(&self) -> bool {
        self.upper_limit_of_lower_ray.is_none() && self.lower_limit_of_upper_ray.is_none()
    }
}

impl std::fmt::Display for RaySet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // `+ 0.0` turns a negative zero into a positive one.
        let ends = (
            self.upper_limit_of_lower_ray.map(|a| a + 0.0),
            self.lower_limit_of_upper_ray.map(|b| b + 0.0),
        );
        match ends {
            (None, None) => write!(f, "∅"),
            (Some(a), None) => write!(f, "(-inf, {a}]"),
            (None, Some(b)) => write!(f, "[{b}, inf)"),
            (Some(a), Some(b)) => write!(f, "(-inf, {a}] U [{b}, inf)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClass {
    VanishesLeft,
    VanishesRight,
    Both,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityReport {
    /// Limit of `W_{u,u_λ}` at the left endpoint; `+∞` where `u` diverges.
    pub w_left: f64,
    /// Limit at the right endpoint; `−∞` where `u` diverges.
    pub w_right: f64,
    pub admissible_k: RaySet,
    /// Present for the integral representation only.
    pub admissible_omega0: Option<RaySet>,
    pub boundary_class: BoundaryClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityCheck {
    pub regular: bool,
    pub zero: Option<f64>,
    pub w_left: f64,
    pub w_right: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{box_eigenfunction, box_partner_closed, BoxSine, RadialOscillator};
    use std::f64::consts::PI;

    const L4: f64 = 4.0 * PI * PI;

    fn box_df(k: f64) -> SusyTransform<BoxSine> {
        SusyTransform::differential(BoxSine::unit(), L4, k).unwrap()
    }

    #[test]
    fn wronskian_anchors() {
        let t = box_df(0.555);
        assert!((wronskian_df(&t, 0.0).unwrap() - 0.555).abs() < 1e-15);
        assert!((wronskian_df(&t, 1.0).unwrap() - 0.055).abs() < 1e-12);
        assert!(wronskian_vc(&t, 0.5).is_err());
        let vc = SusyTransform::integral(BoxSine::unit(), PI * PI, 0.0, 1.0).unwrap();
        assert!((wronskian_vc(&vc, 1.0).unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(wronskian_vc(&vc, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn wronskian_decreases_like_minus_u_squared() {
        let t = box_df(0.555);
        for &x in &[0.1, 0.37, 0.8] {
            let d = numdiff::first_derivative(|s| t.wronskian(s), x, 1e-3).unwrap();
            let u = (2.0 * PI * x).sin();
            assert!((d + u * u).abs() < 1e-8);
        }
    }

    #[test]
    fn integral_and_differential_forms_agree() {
        let k = 0.555;
        let x0 = 0.3;
        let df = box_df(k);
        let omega0 = k + lambda_wronskian(&BoxSine::unit(), x0, L4).unwrap();
        let vc = SusyTransform::integral(BoxSine::unit(), L4, x0, omega0).unwrap();
        for &x in &[0.05, 0.3, 0.61, 0.99] {
            assert!((df.wronskian(x).unwrap() - vc.wronskian(x).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn box_partner_matches_closed_form_and_log_derivative() {
        let t = box_df(0.555);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let generic = t.partner_potential(x).unwrap();
            let closed = box_partner_closed(2, 0.555, x).unwrap();
            assert!((generic - closed).abs() < 1e-9, "x={x}: {generic} vs {closed}");
            if (0.02..0.98).contains(&x) {
                let log_w = numdiff::second_derivative(|s| Ok(t.wronskian(s)?.abs().ln()), x, 1e-3)
                    .unwrap();
                assert!((generic - (0.0 - 2.0 * log_w)).abs() < 1e-6, "x={x}");
            }
        }
    }

    #[test]
    fn transformed_states_solve_partner_equation() {
        let t = box_df(0.555);
        let psi = box_eigenfunction();
        for n in 1..=3u32 {
            let eps = (n as f64 * PI).powi(2);
            for i in 1..20 {
                let x = 0.05 * i as f64;
                let r = t.state_residual(&psi, eps, x).unwrap();
                assert!(r < 1e-6, "n={n} x={x}: {r}");
                let d = numdiff::first_derivative(|s| t.transform_state(&psi, eps, s), x, 1e-4).unwrap();
                let (_, phi_x) = t.transform_state_with_derivative(&psi, eps, x).unwrap();
                assert!((d - phi_x).abs() < 1e-6 * (1.0 + phi_x.abs()));
            }
        }
        let zero = BoxSine { amplitude: 0.0 };
        assert_eq!(t.transform_state(&zero, PI * PI, 0.4).unwrap(), 0.0);
        let missing = t.transform_state(&psi, L4, 0.3).unwrap();
        let expected = (2.0 * PI * 0.3).sin() / t.wronskian(0.3).unwrap();
        assert!((missing - expected).abs() < 1e-14);
    }

    #[test]
    fn box_regularity_rays() {
        let report = box_df(0.555).regularity_range().unwrap();
        assert!(report.w_left.abs() < 1e-10);
        assert!((report.w_right + 0.5).abs() < 1e-10);
        assert_eq!(report.boundary_class, BoundaryClass::Both);
        let a = report.admissible_k.upper_limit_of_lower_ray.unwrap();
        let b = report.admissible_k.lower_limit_of_upper_ray.unwrap();
        assert!(a.abs() < 1e-10 && (b - 0.5).abs() < 1e-10);
        assert!(report.admissible_k.contains(0.555));
        assert!(!report.admissible_k.contains(0.25));
    }

    #[test]
    fn box_regularity_checks() {
        let grid = GridSpec::new(0.0, 1.0, 101).unwrap();
        assert!(box_df(0.555).check_regular(&grid).regular);
        assert!(box_df(0.0).check_regular(&grid).regular);
        assert!(box_df(0.5).check_regular(&grid).regular);
        let bad = box_df(0.25).check_regular(&grid);
        assert!(!bad.regular);
        let z = bad.zero.unwrap();
        assert!(z > 0.0 && z < 1.0);
        assert!(box_df(0.25).wronskian(z).unwrap().abs() < 1e-12);
        // x/2 − sin(4πx)/(8π) = 1/4 at the zero
        assert!((z / 2.0 - (4.0 * PI * z).sin() / (8.0 * PI) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn integral_representation_rays() {
        let t = SusyTransform::integral(BoxSine::unit(), L4, 0.3, 1.0).unwrap();
        let report = t.regularity_range().unwrap();
        let rays = report.admissible_omega0.unwrap();
        let i_left = 0.15 - (4.0 * PI * 0.3).sin() / (8.0 * PI);
        assert!((rays.upper_limit_of_lower_ray.unwrap() + i_left).abs() < 1e-9);
        assert!((rays.lower_limit_of_upper_ray.unwrap() - (0.5 - i_left)).abs() < 1e-9);
    }

    #[test]
    fn radial_oscillator_regularity() {
        let model = RadialOscillator::new(1);
        let t = SusyTransform::differential(model.u1(), 8.0, -0.01).unwrap();
        let report = t.regularity_range().unwrap();
        assert!(report.w_left.abs() < 1e-9);
        assert_eq!(report.w_right, f64::NEG_INFINITY);
        assert_eq!(report.admissible_k.lower_limit_of_upper_ray, None);
        assert!(report.admissible_k.upper_limit_of_lower_ray.unwrap().abs() < 1e-9);
        assert_eq!(report.boundary_class, BoundaryClass::VanishesLeft);
        let grid = GridSpec::new(0.05, 6.0, 300).unwrap();
        assert!(t.check_regular(&grid).regular);
        let positive = SusyTransform::differential(model.u1(), 8.0, 0.01).unwrap();
        let check = positive.check_regular(&grid);
        assert!(!check.regular);
        assert!(check.zero.is_some());
    }

    #[test]
    fn radial_partner_matches_expanded_form() {
        let model = RadialOscillator::new(1);
        let t = SusyTransform::differential(model.u1(), 8.0, -0.01).unwrap();
        for i in 0..=39 {
            let x = 0.1 + 0.1 * i as f64;
            let generic = t.partner_potential(x).unwrap();
            let closed = model.partner_closed(8.0, -0.01, x).unwrap();
            assert!((generic - closed).abs() < 1e-7 * (1.0 + closed.abs()), "x={x}");
        }
    }

    #[test]
    fn zero_wronskian_is_reported() {
        let t = box_df(0.0);
        assert!(matches!(t.partner_potential(0.0), Err(Error::WronskianZero { .. })));
    }

    #[test]
    fn energy_dependent_potential_rejected() {
        let fam = crate::models::EdhoFamily::default();
        assert!(SusyTransform::differential(fam, 1.0, 0.0).is_err());
    }
}
