//! Second-order Jordan chains
//!
//! ```text
//! u_xx + (λ − V(x,λ)) u = 0
//! v_xx + (λ − V(x,λ)) v = (V_λ(x,λ) − 1) u
//! ```
//!
//! and the two ways of producing `v` from a known `u`: the variation-of-constants
//! integral `v_VC` and the parameter derivative `v_DF = u_λ`. Their difference is
//! a homogeneous solution, expressed through connection coefficients `d₁, d₂`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quad::{self, QuadControl};

/// Open interval `(left, right)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub left: f64,
    pub right: f64,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        left: f64::NEG_INFINITY,
        right: f64::INFINITY,
    };

    pub fn new(left: f64, right: f64) -> Self {
        Self { left, right }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.left && x < self.right
    }

    /// Closed-interval containment, for closed-form families that extend to finite endpoints.
    pub fn contains_closure(&self, x: f64) -> bool {
        x >= self.left && x <= self.right
    }
}

/// A potential `V(x, λ)` together with its energy derivative `V_λ`.
pub trait EnergyPotential: Send + Sync {
    fn value(&self, x: f64, lambda: f64) -> f64;

    /// `∂V/∂λ`; identically zero unless overridden.
    fn lambda_derivative(&self, _x: f64, _lambda: f64) -> f64 {
        0.0
    }

    fn is_energy_independent(&self) -> bool {
        true
    }

    fn domain(&self) -> Domain;
}

impl<P: EnergyPotential + ?Sized> EnergyPotential for &P {
    fn value(&self, x: f64, lambda: f64) -> f64 {
        (**self).value(x, lambda)
    }
    fn lambda_derivative(&self, x: f64, lambda: f64) -> f64 {
        (**self).lambda_derivative(x, lambda)
    }
    fn is_energy_independent(&self) -> bool {
        (**self).is_energy_independent()
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
}

impl<P: EnergyPotential + ?Sized> EnergyPotential for Arc<P> {
    fn value(&self, x: f64, lambda: f64) -> f64 {
        (**self).value(x, lambda)
    }
    fn lambda_derivative(&self, x: f64, lambda: f64) -> f64 {
        (**self).lambda_derivative(x, lambda)
    }
    fn is_energy_independent(&self) -> bool {
        (**self).is_energy_independent()
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
}

/// Weight `1 − V_λ` of the inhomogeneous term; exactly `1.0` for energy-independent potentials.
pub fn source_weight<P: EnergyPotential + ?Sized>(pot: &P, x: f64, lambda: f64) -> f64 {
    if pot.is_energy_independent() {
        1.0
    } else {
        1.0 - pot.lambda_derivative(x, lambda)
    }
}

/// `u² (1 − V_λ)`, routed to plain `u²` for energy-independent potentials.
pub fn weighted_square<P: EnergyPotential + ?Sized>(pot: &P, u: f64, x: f64, lambda: f64) -> f64 {
    if pot.is_energy_independent() {
        u * u
    } else {
        u * u * (1.0 - pot.lambda_derivative(x, lambda))
    }
}

type PotentialFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Potential given by closures.
#[derive(Clone)]
pub struct FnPotential {
    value: Arc<PotentialFn>,
    lambda_derivative: Option<Arc<PotentialFn>>,
    domain: Domain,
}

impl FnPotential {
    pub fn energy_independent<V>(domain: Domain, v: V) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(move |x, _| v(x)),
            lambda_derivative: None,
            domain,
        }
    }

    pub fn energy_dependent<V, D>(domain: Domain, v: V, v_lambda: D) -> Self
    where
        V: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(v),
            lambda_derivative: Some(Arc::new(v_lambda)),
            domain,
        }
    }
}

impl fmt::Debug for FnPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnPotential")
            .field("domain", &self.domain)
            .field("energy_dependent", &self.lambda_derivative.is_some())
            .finish()
    }
}

impl EnergyPotential for FnPotential {
    fn value(&self, x: f64, lambda: f64) -> f64 {
        (self.value)(x, lambda)
    }
    fn lambda_derivative(&self, x: f64, lambda: f64) -> f64 {
        self.lambda_derivative.as_ref().map_or(0.0, |d| d(x, lambda))
    }
    fn is_energy_independent(&self) -> bool {
        self.lambda_derivative.is_none()
    }
    fn domain(&self) -> Domain {
        self.domain
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    NumericOde,
}

/// Default central-difference step in λ: `1e-5 · max(1, |λ|)`.
pub fn default_lambda_step(lambda: f64) -> f64 {
    1e-5 * lambda.abs().max(1.0)
}

/// A solution `u(x, λ)` of the first chain equation with its partial derivatives.
///
/// `u_lambda` and `u_lambda_x` fall back to central differences in λ when a
/// family has no analytic expression for them.
pub trait SolutionFamily: Send + Sync {
    fn potential(&self) -> &dyn EnergyPotential;

    fn u(&self, x: f64, lambda: f64) -> Result<f64>;

    fn u_x(&self, x: f64, lambda: f64) -> Result<f64>;

    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        let h = self.fd_step_lambda(lambda);
        Ok((self.u(x, lambda + h)? - self.u(x, lambda - h)?) / (2.0 * h))
    }

    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let h = self.fd_step_lambda(lambda);
        Ok((self.u_x(x, lambda + h)? - self.u_x(x, lambda - h)?) / (2.0 * h))
    }

    /// Second derivative taken from the differential equation itself.
    fn u_xx(&self, x: f64, lambda: f64) -> Result<f64> {
        let pot = self.potential();
        Ok((pot.value(x, lambda) - lambda) * self.u(x, lambda)?)
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }

    fn fd_step_lambda(&self, lambda: f64) -> f64 {
        default_lambda_step(lambda)
    }
}

macro_rules! forward_family {
    ($($ty:ty),*) => {$(
        impl<F: SolutionFamily + ?Sized> SolutionFamily for $ty {
            fn potential(&self) -> &dyn EnergyPotential { (**self).potential() }
            fn u(&self, x: f64, l: f64) -> Result<f64> { (**self).u(x, l) }
            fn u_x(&self, x: f64, l: f64) -> Result<f64> { (**self).u_x(x, l) }
            fn u_lambda(&self, x: f64, l: f64) -> Result<f64> { (**self).u_lambda(x, l) }
            fn u_lambda_x(&self, x: f64, l: f64) -> Result<f64> { (**self).u_lambda_x(x, l) }
            fn u_xx(&self, x: f64, l: f64) -> Result<f64> { (**self).u_xx(x, l) }
            fn provenance(&self) -> Provenance { (**self).provenance() }
            fn fd_step_lambda(&self, l: f64) -> f64 { (**self).fd_step_lambda(l) }
        }
    )*};
}

forward_family!(&F, Box<F>, Arc<F>);

/// `W_{f,g} = f g_x − g f_x` from point values.
pub fn wronskian(f: f64, f_x: f64, g: f64, g_x: f64) -> f64 {
    f * g_x - g * f_x
}

/// `W_{u,u_λ}(x, λ)`.
pub fn lambda_wronskian<F: SolutionFamily + ?Sized>(family: &F, x: f64, lambda: f64) -> Result<f64> {
    Ok(wronskian(
        family.u(x, lambda)?,
        family.u_x(x, lambda)?,
        family.u_lambda(x, lambda)?,
        family.u_lambda_x(x, lambda)?,
    ))
}

/// `W_{f,g}(x, λ)` for two families.
pub fn family_wronskian<F, G>(f: &F, g: &G, x: f64, lambda: f64) -> Result<f64>
where
    F: SolutionFamily + ?Sized,
    G: SolutionFamily + ?Sized,
{
    Ok(wronskian(
        f.u(x, lambda)?,
        f.u_x(x, lambda)?,
        g.u(x, lambda)?,
        g.u_x(x, lambda)?,
    ))
}

/// Second solution by reduction of order, `u₂ = u ∫_{x₀}^x u⁻² dt`.
#[derive(Debug, Clone)]
pub struct ReducedOrder<F> {
    base: F,
    x0: f64,
    quad: QuadControl,
}

/// Build `u₂(x, λ) = u(x, λ) ∫_{x₀}^x u(t, λ)⁻² dt`, so that `W_{u,u₂} = 1`.
///
/// Evaluation fails with [`Error::SingularIntegrand`] if `u` vanishes between
/// `x₀` and the evaluation point.
pub fn second_solution<F: SolutionFamily>(family: F, x0: f64) -> ReducedOrder<F> {
    ReducedOrder {
        base: family,
        x0,
        quad: QuadControl::with_tol(1e-12),
    }
}

const ZERO_SCAN_NODES: usize = 256;

impl<F: SolutionFamily> ReducedOrder<F> {
    pub fn with_quad(mut self, quad: QuadControl) -> Self {
        self.quad = quad;
        self
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn base_point(&self) -> f64 {
        self.x0
    }

    fn inverse_square_integral(&self, x: f64, lambda: f64) -> Result<f64> {
        if x == self.x0 {
            return Ok(0.0);
        }
        quad::ensure_zero_free(|t| self.base.u(t, lambda), self.x0, x, ZERO_SCAN_NODES)?;
        quad::simpson(
            |t| {
                let u = self.base.u(t, lambda)?;
                Ok(1.0 / (u * u))
            },
            self.x0,
            x,
            &self.quad,
        )
    }

    // ∂/∂λ of ∫ u⁻² = ∫ −2 u_λ / u³
    fn inverse_square_integral_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        if x == self.x0 {
            return Ok(0.0);
        }
        quad::simpson(
            |t| {
                let u = self.base.u(t, lambda)?;
                Ok(-2.0 * self.base.u_lambda(t, lambda)? / (u * u * u))
            },
            self.x0,
            x,
            &self.quad,
        )
    }
}

impl<F: SolutionFamily> SolutionFamily for ReducedOrder<F> {
    fn potential(&self) -> &dyn EnergyPotential {
        self.base.potential()
    }

    fn u(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.base.u(x, lambda)? * self.inverse_square_integral(x, lambda)?)
    }

    fn u_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let u = self.base.u(x, lambda)?;
        Ok(self.base.u_x(x, lambda)? * self.inverse_square_integral(x, lambda)? + 1.0 / u)
    }

    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        let i = self.inverse_square_integral(x, lambda)?;
        let i_l = self.inverse_square_integral_lambda(x, lambda)?;
        Ok(self.base.u_lambda(x, lambda)? * i + self.base.u(x, lambda)? * i_l)
    }

    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let i = self.inverse_square_integral(x, lambda)?;
        let i_l = self.inverse_square_integral_lambda(x, lambda)?;
        let u = self.base.u(x, lambda)?;
        let u_l = self.base.u_lambda(x, lambda)?;
        Ok(self.base.u_lambda_x(x, lambda)? * i + self.base.u_x(x, lambda)? * i_l - u_l / (u * u))
    }

    fn provenance(&self) -> Provenance {
        self.base.provenance()
    }

    fn fd_step_lambda(&self, lambda: f64) -> f64 {
        self.base.fd_step_lambda(lambda)
    }
}

/// Pointwise sum of two families at the same potential.
#[derive(Debug, Clone)]
pub struct SumFamily<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: SolutionFamily, B: SolutionFamily> SolutionFamily for SumFamily<A, B> {
    fn potential(&self) -> &dyn EnergyPotential {
        self.first.potential()
    }
    fn u(&self, x: f64, l: f64) -> Result<f64> {
        Ok(self.first.u(x, l)? + self.second.u(x, l)?)
    }
    fn u_x(&self, x: f64, l: f64) -> Result<f64> {
        Ok(self.first.u_x(x, l)? + self.second.u_x(x, l)?)
    }
    fn u_lambda(&self, x: f64, l: f64) -> Result<f64> {
        Ok(self.first.u_lambda(x, l)? + self.second.u_lambda(x, l)?)
    }
    fn u_lambda_x(&self, x: f64, l: f64) -> Result<f64> {
        Ok(self.first.u_lambda_x(x, l)? + self.second.u_lambda_x(x, l)?)
    }
    fn provenance(&self) -> Provenance {
        match (self.first.provenance(), self.second.provenance()) {
            (Provenance::ClosedForm, Provenance::ClosedForm) => Provenance::ClosedForm,
            _ => Provenance::NumericOde,
        }
    }
}

/// Tabulated inner antiderivative `F(t) = ∫_{x₀}^t u²(1 − V_λ) ds` for the
/// variation-of-constants solution.
///
/// Panels of width at most [`VC_PANEL_WIDTH`] are integrated with an eight-point
/// Gauss-Legendre rule; `F(t)` between nodes adds one more Gauss-Legendre panel,
/// so the outer adaptive rule sees a smooth integrand.
pub struct VariationOfConstants<'a, F: ?Sized> {
    family: &'a F,
    x0: f64,
    lambda: f64,
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
    quad: QuadControl,
}

pub const VC_PANEL_WIDTH: f64 = 0.01;

impl<'a, F: SolutionFamily + ?Sized> VariationOfConstants<'a, F> {
    /// Prepare `v_VC` with base point `x0` for evaluation anywhere between `x0` and `reach`.
    pub fn new(family: &'a F, x0: f64, reach: f64, lambda: f64, quad: QuadControl) -> Result<Self> {
        quad::ensure_zero_free(|t| family.u(t, lambda), x0, reach, ZERO_SCAN_NODES.max(
            ((reach - x0).abs() / VC_PANEL_WIDTH) as usize,
        ))?;
        let panels = (((reach - x0).abs() / VC_PANEL_WIDTH).ceil() as usize).max(1);
        let mut nodes = Vec::with_capacity(panels + 1);
        let mut cumulative = Vec::with_capacity(panels + 1);
        nodes.push(x0);
        cumulative.push(0.0);
        let pot = family.potential();
        for i in 1..=panels {
            let t = if i == panels {
                reach
            } else {
                x0 + (reach - x0) * i as f64 / panels as f64
            };
            let prev = *nodes.last().unwrap();
            let piece = quad::gauss_legendre8(
                |s| Ok(weighted_square(pot, family.u(s, lambda)?, s, lambda)),
                prev,
                t,
            )?;
            cumulative.push(cumulative.last().unwrap() + piece);
            nodes.push(t);
        }
        Ok(Self {
            family,
            x0,
            lambda,
            nodes,
            cumulative,
            quad,
        })
    }

    /// `∫_{x₀}^t u²(1 − V_λ) ds` for `t` between `x0` and `reach`.
    pub fn inner(&self, t: f64) -> Result<f64> {
        let last = self.nodes.len() - 1;
        let (lo, hi) = (self.nodes[0].min(self.nodes[last]), self.nodes[0].max(self.nodes[last]));
        if t < lo - 1e-12 || t > hi + 1e-12 {
            return Err(Error::InvalidInput(format!(
                "point {t} outside the tabulated window [{lo}, {hi}]"
            )));
        }
        let span = self.nodes[last] - self.nodes[0];
        let idx = if span == 0.0 {
            0
        } else {
            (((t - self.x0) / span * last as f64).floor() as isize).clamp(0, last as isize) as usize
        };
        let start = self.nodes[idx];
        let pot = self.family.potential();
        let tail = quad::gauss_legendre8(
            |s| Ok(weighted_square(pot, self.family.u(s, self.lambda)?, s, self.lambda)),
            start,
            t,
        )?;
        Ok(self.cumulative[idx] + tail)
    }

    /// `∫_{x₀}^x F(t) u(t)⁻² dt`.
    pub fn double_integral(&self, x: f64) -> Result<f64> {
        quad::simpson(
            |t| {
                let u = self.family.u(t, self.lambda)?;
                Ok(self.inner(t)? / (u * u))
            },
            self.x0,
            x,
            &self.quad,
        )
    }

    /// `(v_VC(x), v_VC'(x))`.
    pub fn value_and_derivative(&self, x: f64) -> Result<(f64, f64)> {
        let u = self.family.u(x, self.lambda)?;
        let u_x = self.family.u_x(x, self.lambda)?;
        let d = self.double_integral(x)?;
        Ok((-u * d, -u_x * d - self.inner(x)? / u))
    }
}

/// Variation-of-constants particular solution
/// `v_VC(x) = −u(x) ∫_{x₀}^x [∫_{x₀}^t u²(s)(1 − V_λ(s)) ds] u(t)⁻² dt`,
/// normalized by `v_VC(x₀) = v_VC'(x₀) = 0`.
pub fn v_vc<F: SolutionFamily + ?Sized>(family: &F, x0: f64, x: f64, lambda: f64) -> Result<f64> {
    v_vc_with(family, x0, x, lambda, &QuadControl::default())
}

pub fn v_vc_with<F: SolutionFamily + ?Sized>(
    family: &F,
    x0: f64,
    x: f64,
    lambda: f64,
    quad: &QuadControl,
) -> Result<f64> {
    if x == x0 {
        return Ok(0.0);
    }
    Ok(VariationOfConstants::new(family, x0, x, lambda, *quad)?
        .value_and_derivative(x)?
        .0)
}

/// Differential-formula particular solution `v_DF = u_λ`.
pub fn v_df<F: SolutionFamily + ?Sized>(family: &F, x: f64, lambda: f64) -> Result<f64> {
    family.u_lambda(x, lambda)
}

/// Constants with `d₁u₁ + d₂u₂ = v_DF − v_VC`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConnectionCoeffs {
    pub d1: f64,
    pub d2: f64,
    /// Point at which the Wronskians were evaluated.
    pub base_point: f64,
}

/// Tolerance on `|W_{u₁,u₂} − 1|` accepted by the connection-coefficient routines.
pub const UNIT_WRONSKIAN_TOL: f64 = 1e-7;

fn check_unit_wronskian<F, G>(u1: &F, u2: &G, x: f64, lambda: f64) -> Result<()>
where
    F: SolutionFamily + ?Sized,
    G: SolutionFamily + ?Sized,
{
    let w = family_wronskian(u1, u2, x, lambda)?;
    if (w - 1.0).abs() > UNIT_WRONSKIAN_TOL {
        return Err(Error::WronskianNotUnit { value: w });
    }
    Ok(())
}

/// `d₁ = W_{v_DF,u₂}(x₀)`, `d₂ = W_{u₁,v_DF}(x₀)`, valid when `v_VC` is
/// normalized at `x₀` and `W_{u₁,u₂} = 1`.
pub fn connection_coeffs<F, G>(family: &F, u2: &G, x0: f64, lambda: f64) -> Result<ConnectionCoeffs>
where
    F: SolutionFamily + ?Sized,
    G: SolutionFamily + ?Sized,
{
    check_unit_wronskian(family, u2, x0, lambda)?;
    let v = family.u_lambda(x0, lambda)?;
    let v_x = family.u_lambda_x(x0, lambda)?;
    Ok(ConnectionCoeffs {
        d1: wronskian(v, v_x, u2.u(x0, lambda)?, u2.u_x(x0, lambda)?),
        d2: wronskian(family.u(x0, lambda)?, family.u_x(x0, lambda)?, v, v_x),
        base_point: x0,
    })
}

/// General form `d₁ = W_{v_DF−v_VC,u₂}(x)`, `d₂ = W_{u₁,v_DF−v_VC}(x)` with
/// `v_VC` based at `vc_base` and the Wronskians taken at an arbitrary `eval_point`.
pub fn connection_coeffs_at<F, G>(
    family: &F,
    u2: &G,
    vc_base: f64,
    eval_point: f64,
    lambda: f64,
    quad: &QuadControl,
) -> Result<ConnectionCoeffs>
where
    F: SolutionFamily + ?Sized,
    G: SolutionFamily + ?Sized,
{
    check_unit_wronskian(family, u2, eval_point, lambda)?;
    let (vc, vc_x) = if eval_point == vc_base {
        (0.0, 0.0)
    } else {
        VariationOfConstants::new(family, vc_base, eval_point, lambda, *quad)?
            .value_and_derivative(eval_point)?
    };
    let g = family.u_lambda(eval_point, lambda)? - vc;
    let g_x = family.u_lambda_x(eval_point, lambda)? - vc_x;
    Ok(ConnectionCoeffs {
        d1: wronskian(g, g_x, u2.u(eval_point, lambda)?, u2.u_x(eval_point, lambda)?),
        d2: wronskian(family.u(eval_point, lambda)?, family.u_x(eval_point, lambda)?, g, g_x),
        base_point: eval_point,
    })
}

/// Which particular solution a [`JordanPair`] carries, with its free constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Representation {
    /// `v = v_VC + ω₀ u₂` with `v_VC` based at `base_point`; then `W_{u,v} = ω₀ − ∫_{x₀}^x u²`.
    VariationOfConstants { base_point: f64, omega0: f64 },
    /// `v = u_λ + K u₂`; then `W_{u,v} = K + W_{u,u_λ}`.
    Differential { k: f64 },
}

/// A solution `(u, v)` of the chain, with `u₂` the homogeneous partner of `u`
/// satisfying `W_{u,u₂} = 1`.
pub struct JordanPair<F, G> {
    pub family: F,
    pub partner: G,
    pub representation: Representation,
    pub quad: QuadControl,
}

impl<F: SolutionFamily, G: SolutionFamily> JordanPair<F, G> {
    pub fn differential(family: F, partner: G, k: f64) -> Self {
        Self {
            family,
            partner,
            representation: Representation::Differential { k },
            quad: QuadControl::default(),
        }
    }

    pub fn variation_of_constants(family: F, partner: G, base_point: f64, omega0: f64) -> Self {
        Self {
            family,
            partner,
            representation: Representation::VariationOfConstants { base_point, omega0 },
            quad: QuadControl::default(),
        }
    }

    /// `(v(x), v_x(x))`.
    pub fn v_and_derivative(&self, x: f64, lambda: f64) -> Result<(f64, f64)> {
        let (p, p_x, c) = match self.representation {
            Representation::Differential { k } => (
                self.family.u_lambda(x, lambda)?,
                self.family.u_lambda_x(x, lambda)?,
                k,
            ),
            Representation::VariationOfConstants { base_point, omega0 } => {
                let (v, v_x) = if x == base_point {
                    (0.0, 0.0)
                } else {
                    VariationOfConstants::new(&self.family, base_point, x, lambda, self.quad)?
                        .value_and_derivative(x)?
                };
                (v, v_x, omega0)
            }
        };
        if c == 0.0 {
            return Ok((p, p_x));
        }
        Ok((
            p + c * self.partner.u(x, lambda)?,
            p_x + c * self.partner.u_x(x, lambda)?,
        ))
    }

    pub fn v(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.v_and_derivative(x, lambda)?.0)
    }

    pub fn v_x(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.v_and_derivative(x, lambda)?.1)
    }

    /// `W_{u,v}(x)` from the pair's own functions.
    pub fn wronskian(&self, x: f64, lambda: f64) -> Result<f64> {
        let (v, v_x) = self.v_and_derivative(x, lambda)?;
        Ok(wronskian(self.family.u(x, lambda)?, self.family.u_x(x, lambda)?, v, v_x))
    }
}

/// `|u_xx + (λ − V)u|` with `u_xx` from a five-point stencil of step `h`.
pub fn first_equation_residual<F: SolutionFamily + ?Sized>(
    family: &F,
    x: f64,
    lambda: f64,
    h: f64,
) -> Result<f64> {
    let u_xx = crate::numdiff::second_derivative(|t| family.u(t, lambda), x, h)?;
    let pot = family.potential();
    Ok((u_xx + (lambda - pot.value(x, lambda)) * family.u(x, lambda)?).abs())
}

/// `|v_xx + (λ − V)v − (V_λ − 1)u|` with `v_xx` from a five-point stencil.
pub fn second_equation_residual<F, V>(family: &F, v: V, x: f64, lambda: f64, h: f64) -> Result<f64>
where
    F: SolutionFamily + ?Sized,
    V: FnMut(f64) -> Result<f64>,
{
    let mut v = v;
    let v_xx = crate::numdiff::second_derivative(&mut v, x, h)?;
    let pot = family.potential();
    let u = family.u(x, lambda)?;
    let source = if pot.is_energy_independent() {
        -u
    } else {
        (pot.lambda_derivative(x, lambda) - 1.0) * u
    };
    Ok((v_xx + (lambda - pot.value(x, lambda)) * v(x)? - source).abs())
}

// ---------------------------------------------------------------------------
// Numerical integration of the first chain equation
// ---------------------------------------------------------------------------

/// Largest RK4 step; coarser grids are subdivided.
pub const MAX_RK4_STEP: f64 = 1e-3;

#[derive(Debug, Clone)]
struct Tabulation {
    x: Vec<f64>,
    u: Vec<f64>,
    u_x: Vec<f64>,
    u_xx: Vec<f64>,
}

impl Tabulation {
    fn locate(&self, x: f64) -> Result<usize> {
        let n = self.x.len();
        if !(x >= self.x[0] && x <= self.x[n - 1]) {
            return Err(Error::InvalidInput(format!(
                "x={x} outside the integration grid [{}, {}]",
                self.x[0],
                self.x[n - 1]
            )));
        }
        let idx = self.x.partition_point(|&t| t <= x);
        Ok(idx.clamp(1, n - 1) - 1)
    }

    // Quintic Hermite interpolation through (u, u', u'') at both ends of the cell.
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let i = self.locate(x)?;
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let g0 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let g1 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let k0 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let k1 = 0.5 * (t3 - 2.0 * t4 + t5);
        let dh0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let dg0 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let dg1 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let dk0 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
        let dk1 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (d0, d1) = (self.u_x[i], self.u_x[i + 1]);
        let (s0, s1) = (self.u_xx[i], self.u_xx[i + 1]);
        let value = u0 * h0 + u1 * h1 + h * (d0 * g0 + d1 * g1) + h * h * (s0 * k0 + s1 * k1);
        let slope = (u0 - u1) * dh0 / h + d0 * dg0 + d1 * dg1 + h * (s0 * dk0 + s1 * dk1);
        Ok((value, slope))
    }
}

fn rk4_integrate<P: EnergyPotential + ?Sized>(
    pot: &P,
    lambda: f64,
    nodes: &[f64],
    start: usize,
    u0: f64,
    ux0: f64,
    x_init: f64,
) -> Result<Tabulation> {
    let n = nodes.len();
    let q = |x: f64| pot.value(x, lambda) - lambda;
    let mut u = vec![0.0; n];
    let mut u_x = vec![0.0; n];

    let step = |x: f64, y: (f64, f64), h: f64| -> (f64, f64) {
        let f = |x: f64, (a, b): (f64, f64)| (b, q(x) * a);
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, (y.0 + 0.5 * h * k1.0, y.1 + 0.5 * h * k1.1));
        let k3 = f(x + 0.5 * h, (y.0 + 0.5 * h * k2.0, y.1 + 0.5 * h * k2.1));
        let k4 = f(x + h, (y.0 + h * k3.0, y.1 + h * k3.1));
        (
            y.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            y.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    };
    let advance = |from: f64, to: f64, y: (f64, f64)| -> Result<(f64, f64)> {
        let span = to - from;
        if span == 0.0 {
            return Ok(y);
        }
        let substeps = (span.abs() / MAX_RK4_STEP).ceil().max(1.0) as usize;
        let h = span / substeps as f64;
        let mut y = y;
        for s in 0..substeps {
            y = step(from + h * s as f64, y, h);
            if !y.0.is_finite() || !y.1.is_finite() {
                return Err(Error::StepFailure {
                    at: from + h * (s + 1) as f64,
                });
            }
        }
        Ok(y)
    };

    // `start` is the first node at or above x_init.
    let mut y = advance(x_init, nodes[start], (u0, ux0))?;
    u[start] = y.0;
    u_x[start] = y.1;
    for i in start + 1..n {
        y = advance(nodes[i - 1], nodes[i], y)?;
        u[i] = y.0;
        u_x[i] = y.1;
    }
    if start > 0 {
        y = advance(x_init, nodes[start - 1], (u0, ux0))?;
        u[start - 1] = y.0;
        u_x[start - 1] = y.1;
        for i in (0..start - 1).rev() {
            y = advance(nodes[i + 1], nodes[i], y)?;
            u[i] = y.0;
            u_x[i] = y.1;
        }
    }
    let u_xx = nodes.iter().zip(&u).map(|(&x, &v)| q(x) * v).collect();
    Ok(Tabulation {
        x: nodes.to_vec(),
        u,
        u_x,
        u_xx,
    })
}

/// Solution of the first chain equation obtained by RK4 from initial data that
/// does not depend on λ. `u_λ` is the central difference of two extra solves at
/// `λ ± h`, so the family is only defined at its own λ.
pub struct NumericFamily<P> {
    pot: P,
    lambda: f64,
    step: f64,
    centre: Tabulation,
    plus: Tabulation,
    minus: Tabulation,
}

impl<P> fmt::Debug for NumericFamily<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericFamily")
            .field("lambda", &self.lambda)
            .field("fd_step_lambda", &self.step)
            .field("nodes", &self.centre.x.len())
            .finish()
    }
}

/// Integrate `u_xx + (λ − V)u = 0` from `u(x_init) = u_init`, `u_x(x_init) = ux_init`
/// across `grid` with fixed-step RK4 (step ≤ [`MAX_RK4_STEP`]).
pub fn solve_u_numeric<P: EnergyPotential>(
    pot: P,
    lambda: f64,
    x_init: f64,
    u_init: f64,
    ux_init: f64,
    grid: GridSpec,
) -> Result<NumericFamily<P>> {
    let domain = pot.domain();
    if !domain.contains(grid.x_min) || !domain.contains(grid.x_max) {
        return Err(Error::InvalidInput(format!(
            "grid [{}, {}] not inside the open domain ({}, {})",
            grid.x_min, grid.x_max, domain.left, domain.right
        )));
    }
    if !(x_init >= grid.x_min && x_init <= grid.x_max) {
        return Err(Error::InvalidInput(format!(
            "initial point {x_init} outside the grid"
        )));
    }
    let nodes: Vec<f64> = grid.points().collect();
    let start = nodes.partition_point(|&t| t < x_init);
    let step = default_lambda_step(lambda);
    let solve = |l: f64| rk4_integrate(&pot, l, &nodes, start, u_init, ux_init, x_init);
    let centre = solve(lambda)?;
    let plus = solve(lambda + step)?;
    let minus = solve(lambda - step)?;
    Ok(NumericFamily {
        pot,
        lambda,
        step,
        centre,
        plus,
        minus,
    })
}

impl<P: EnergyPotential> NumericFamily<P> {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn table(&self, lambda: f64) -> Result<&Tabulation> {
        if lambda == self.lambda {
            Ok(&self.centre)
        } else if lambda == self.lambda + self.step {
            Ok(&self.plus)
        } else if lambda == self.lambda - self.step {
            Ok(&self.minus)
        } else {
            Err(Error::InvalidInput(format!(
                "numeric family solved at λ={}, queried at λ={lambda}",
                self.lambda
            )))
        }
    }
}

impl<P: EnergyPotential> SolutionFamily for NumericFamily<P> {
    fn potential(&self) -> &dyn EnergyPotential {
        &self.pot
    }

    fn u(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.table(lambda)?.eval(x)?.0)
    }

    fn u_x(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.table(lambda)?.eval(x)?.1)
    }

    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        self.table(lambda)?;
        Ok((self.plus.eval(x)?.0 - self.minus.eval(x)?.0) / (2.0 * self.step))
    }

    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        self.table(lambda)?;
        Ok((self.plus.eval(x)?.1 - self.minus.eval(x)?.1) / (2.0 * self.step))
    }

    fn provenance(&self) -> Provenance {
        Provenance::NumericOde
    }

    fn fd_step_lambda(&self, _lambda: f64) -> f64 {
        self.step
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BoxCosine, BoxSine, RadialOscillator};
    use std::f64::consts::PI;

    fn free_particle() -> FnPotential {
        FnPotential::energy_independent(Domain::new(0.0, 1.0), |_| 0.0)
    }

    #[test]
    fn free_particle_rk4_matches_sine() {
        let grid = GridSpec::new(1e-6, 1.0 - 1e-6, 1001).unwrap();
        let fam = solve_u_numeric(free_particle(), PI * PI, 1e-6, (PI * 1e-6).sin(), PI * (PI * 1e-6).cos(), grid)
            .unwrap();
        let u = fam.u(0.5, PI * PI).unwrap();
        assert!((u - 1.0).abs() < 1e-8, "{u}");
        let ux = fam.u_x(0.3, PI * PI).unwrap();
        assert!((ux - PI * (0.3 * PI).cos()).abs() < 1e-8);
        assert!(fam.u(0.5, 2.0).is_err());
        assert_eq!(fam.provenance(), Provenance::NumericOde);
    }

    #[test]
    fn numeric_u_lambda_matches_analytic_box() {
        // initial data of sin(√λ x) at x=0 is λ-dependent through u_x, so compare
        // against the derivative with both u(0.25) and u_x(0.25) frozen instead.
        let lambda: f64 = 6.0;
        let k = lambda.sqrt();
        let x_i = 0.25;
        let grid = GridSpec::new(0.05, 0.95, 901).unwrap();
        let fam = solve_u_numeric(free_particle(), lambda, x_i, 0.7, -0.4, grid).unwrap();
        // u = A cos(k(x−x_i)) + B sin(k(x−x_i))/k with A=0.7, B=−0.4
        let exact = |x: f64, l: f64| {
            let k = l.sqrt();
            0.7 * (k * (x - x_i)).cos() - 0.4 * (k * (x - x_i)).sin() / k
        };
        let h = 1e-6;
        for &x in &[0.1, 0.5, 0.9] {
            let analytic = (exact(x, lambda + h) - exact(x, lambda - h)) / (2.0 * h);
            let got = fam.u_lambda(x, lambda).unwrap();
            assert!((got - analytic).abs() < 1e-6, "x={x}: {got} vs {analytic} (k={k})");
        }
    }

    #[test]
    fn rk4_reproduces_radial_oscillator() {
        let model = RadialOscillator::new(1);
        let lambda = 8.0;
        let fam = model.u1();
        let x_i = 0.1;
        let grid = GridSpec::new(0.1, 2.0, 1901).unwrap();
        let num = solve_u_numeric(
            model.potential(),
            lambda,
            x_i,
            fam.u(x_i, lambda).unwrap(),
            fam.u_x(x_i, lambda).unwrap(),
            grid,
        )
        .unwrap();
        let got = num.u(2.0, lambda).unwrap();
        let exact = fam.u(2.0, lambda).unwrap();
        assert!((got - exact).abs() < 1e-6, "{got} vs {exact}");
    }

    #[test]
    fn second_solution_has_unit_wronskian() {
        let lambda = PI * PI;
        let u1 = BoxSine::unit();
        let u2 = second_solution(u1, 0.5);
        assert_eq!(u2.u(0.5, lambda).unwrap(), 0.0);
        for &x in &[0.2, 0.4, 0.6, 0.85] {
            let w = family_wronskian(&u1, &u2, x, lambda).unwrap();
            assert!((w - 1.0).abs() < 1e-9, "x={x}: W={w}");
        }
        // u₂ differs from −cos(√λx)/√λ by a multiple of u₁
        let cos = BoxCosine;
        let c0 = (u2.u(0.3, lambda).unwrap() - cos.u(0.3, lambda).unwrap()) / u1.u(0.3, lambda).unwrap();
        let c1 = (u2.u(0.7, lambda).unwrap() - cos.u(0.7, lambda).unwrap()) / u1.u(0.7, lambda).unwrap();
        assert!((c0 - c1).abs() < 1e-9);
    }

    #[test]
    fn second_solution_rejects_nodes() {
        let u2 = second_solution(BoxSine::unit(), 0.5);
        let err = u2.u(1.5, PI * PI).unwrap_err();
        assert!(matches!(err, Error::SingularIntegrand { .. }));
    }

    #[test]
    fn numeric_second_solution_on_oscillator() {
        let model = RadialOscillator::new(1);
        let lambda = 3.0;
        let fam = model.u1();
        let grid = GridSpec::new(0.5, 2.5, 2001).unwrap();
        let num = solve_u_numeric(
            model.potential(),
            lambda,
            1.0,
            fam.u(1.0, lambda).unwrap(),
            fam.u_x(1.0, lambda).unwrap(),
            grid,
        )
        .unwrap();
        let u2 = second_solution(&num, 1.0);
        for &x in &[1.0, 1.3, 1.7, 2.0] {
            let w = family_wronskian(&num, &u2, x, lambda).unwrap();
            assert!((w - 1.0).abs() < 1e-7, "x={x}: {w}");
        }
    }

    #[test]
    fn v_vc_normalization_and_residual() {
        let lambda = PI * PI;
        let fam = BoxSine::unit();
        assert_eq!(v_vc(&fam, 0.5, 0.5, lambda).unwrap(), 0.0);
        let vc = VariationOfConstants::new(&fam, 0.5, 0.2, lambda, QuadControl::default()).unwrap();
        let (v, v_x) = vc.value_and_derivative(0.5).unwrap();
        assert!(v.abs() < 1e-10 && v_x.abs() < 1e-10);
        for &x in &[0.25, 0.4, 0.6, 0.75] {
            let r = second_equation_residual(&fam, |t| v_vc(&fam, 0.5, t, lambda), x, lambda, 1e-3)
                .unwrap();
            assert!(r < 1e-6, "x={x}: residual {r}");
        }
    }

    #[test]
    fn v_vc_derivative_matches_stencil() {
        let lambda = 5.0;
        let fam = BoxSine::unit();
        let x = 0.7;
        let vc = VariationOfConstants::new(&fam, 0.4, x, lambda, QuadControl::default()).unwrap();
        let (_, v_x) = vc.value_and_derivative(x).unwrap();
        let fd = crate::numdiff::first_derivative(|t| v_vc(&fam, 0.4, t, lambda), x, 1e-3).unwrap();
        assert!((v_x - fd).abs() < 1e-6);
    }

    #[test]
    fn v_df_box() {
        let lambda = 7.3;
        let fam = BoxSine::unit();
        assert_eq!(v_df(&fam, 0.0, lambda).unwrap(), 0.0);
        let x = 0.6;
        let k = lambda.sqrt();
        let expected = x * (k * x).cos() / (2.0 * k);
        assert!((v_df(&fam, x, lambda).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn connection_identity_box() {
        let lambda = PI * PI;
        let x0 = 0.5;
        let u1 = BoxSine::unit();
        let u2 = BoxCosine;
        let c = connection_coeffs(&u1, &u2, x0, lambda).unwrap();
        for i in 0..9 {
            let x = 0.1 + 0.1 * i as f64;
            let lhs = c.d1 * u1.u(x, lambda).unwrap() + c.d2 * u2.u(x, lambda).unwrap();
            let rhs = v_df(&u1, x, lambda).unwrap() - v_vc(&u1, x0, x, lambda).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "x={x}: {lhs} vs {rhs}");
        }
        let other = connection_coeffs_at(&u1, &u2, x0, 0.3, lambda, &QuadControl::default()).unwrap();
        assert!((other.d1 - c.d1).abs() < 1e-8);
        assert!((other.d2 - c.d2).abs() < 1e-8);
    }

    #[test]
    fn connection_coeffs_vanish_for_projected_df() {
        // v_DF minus its homogeneous projection equals v_VC, so d₁ = d₂ = 0.
        struct Projected {
            inner: BoxSine,
            d1: f64,
            d2: f64,
        }
        impl SolutionFamily for Projected {
            fn potential(&self) -> &dyn EnergyPotential {
                self.inner.potential()
            }
            fn u(&self, x: f64, l: f64) -> Result<f64> {
                self.inner.u(x, l)
            }
            fn u_x(&self, x: f64, l: f64) -> Result<f64> {
                self.inner.u_x(x, l)
            }
            fn u_lambda(&self, x: f64, l: f64) -> Result<f64> {
                Ok(self.inner.u_lambda(x, l)? - self.d1 * self.inner.u(x, l)? - self.d2 * BoxCosine.u(x, l)?)
            }
            fn u_lambda_x(&self, x: f64, l: f64) -> Result<f64> {
                Ok(self.inner.u_lambda_x(x, l)? - self.d1 * self.inner.u_x(x, l)? - self.d2 * BoxCosine.u_x(x, l)?)
            }
        }
        let lambda = 4.0;
        let c = connection_coeffs(&BoxSine::unit(), &BoxCosine, 0.5, lambda).unwrap();
        let p = Projected {
            inner: BoxSine::unit(),
            d1: c.d1,
            d2: c.d2,
        };
        let z = connection_coeffs(&p, &BoxCosine, 0.5, lambda).unwrap();
        assert!(z.d1.abs() < 1e-15 && z.d2.abs() < 1e-15, "{z:?}");
    }

    #[test]
    fn connection_coeffs_require_unit_basis() {
        let err = connection_coeffs(&BoxSine::unit(), &BoxSine::unit(), 0.5, 4.0).unwrap_err();
        assert!(matches!(err, Error::WronskianNotUnit { .. }));
    }

    #[test]
    fn energy_independent_weight_is_exact() {
        let p = free_particle();
        assert_eq!(source_weight(&p, 0.3, 2.0), 1.0);
        assert_eq!(weighted_square(&p, 0.3, 0.1, 1.0), 0.3 * 0.3);
        let e = FnPotential::energy_dependent(Domain::REAL_LINE, |x, l| l * x * x, |x, _| x * x);
        assert_eq!(source_weight(&e, 2.0, 1.0), -3.0);
        assert!(!e.is_energy_independent());
    }

    #[test]
    fn jordan_pair_wronskians() {
        let lambda = 4.0 * PI * PI;
        let df = JordanPair::differential(BoxSine::unit(), BoxCosine, 0.555);
        let w0 = df.wronskian(0.0, lambda).unwrap();
        assert!((w0 - 0.555).abs() < 1e-14);
        let lambda = PI * PI;
        let vc = JordanPair::variation_of_constants(BoxSine::unit(), BoxCosine, 0.5, 0.2);
        let w = vc.wronskian(0.5, lambda).unwrap();
        assert!((w - 0.2).abs() < 1e-12);
        let x = 0.3;
        let expected = 0.2
            - crate::quad::simpson(|t| Ok((PI * t).sin().powi(2)), 0.5, x, &QuadControl::default())
                .unwrap();
        assert!((vc.wronskian(x, lambda).unwrap() - expected).abs() < 1e-9);
    }
}
