//! Built-in exactly solvable systems: the infinite well on `(0, 1)`, the radial
//! oscillator on `(0, ∞)`, and the energy-dependent oscillator `V = λx²` on ℝ.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jordan::{Domain, EnergyPotential, JordanPair, SolutionFamily};
use crate::specfun::{self, SeriesControl};

// ---------------------------------------------------------------------------
// Particle in a box
// ---------------------------------------------------------------------------

/// `V ≡ 0` on `(0, 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoxPotential;

impl EnergyPotential for BoxPotential {
    fn value(&self, _x: f64, _lambda: f64) -> f64 {
        0.0
    }
    fn domain(&self) -> Domain {
        Domain::new(0.0, 1.0)
    }
}

static BOX_POTENTIAL: BoxPotential = BoxPotential;

fn check_positive_energy(lambda: f64) -> Result<f64> {
    if lambda > 0.0 {
        Ok(lambda.sqrt())
    } else {
        Err(Error::InvalidInput(format!(
            "box solutions need λ > 0, got {lambda}"
        )))
    }
}

/// `u = A sin(√λ x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSine {
    pub amplitude: f64,
}

impl BoxSine {
    pub fn unit() -> Self {
        Self { amplitude: 1.0 }
    }
}

impl SolutionFamily for BoxSine {
    fn potential(&self) -> &dyn EnergyPotential {
        &BOX_POTENTIAL
    }
    fn u(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok(self.amplitude * (k * x).sin())
    }
    fn u_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok(self.amplitude * k * (k * x).cos())
    }
    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok(self.amplitude * x * (k * x).cos() / (2.0 * k))
    }
    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok(self.amplitude * ((k * x).cos() / (2.0 * k) - 0.5 * x * (k * x).sin()))
    }
}

/// `u₂ = −cos(√λ x)/√λ`, the partner of [`BoxSine::unit`] with `W_{u₁,u₂} = 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoxCosine;

impl SolutionFamily for BoxCosine {
    fn potential(&self) -> &dyn EnergyPotential {
        &BOX_POTENTIAL
    }
    fn u(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok(-(k * x).cos() / k)
    }
    fn u_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok((k * x).sin())
    }
    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok((x * (k * x).sin() / k + (k * x).cos() / (k * k)) / (2.0 * k))
    }
    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let k = check_positive_energy(lambda)?;
        Ok(x * (k * x).cos() / (2.0 * k))
    }
}

pub fn box_eigenvalue(n: u32) -> f64 {
    let n = n as f64;
    n * n * PI * PI
}

/// Normalized eigenfunction `√2 sin(nπx)`, to be evaluated at `λ = n²π²`.
pub fn box_eigenfunction() -> BoxSine {
    BoxSine {
        amplitude: 2f64.sqrt(),
    }
}

pub fn box_u() -> BoxSine {
    BoxSine::unit()
}

/// `v = x cos(√λx)/(2√λ) − K cos(√λx)/√λ`: the parameter derivative of `u`
/// plus `K` times the partner `−cos(√λx)/√λ`.
pub fn box_v(k: f64) -> JordanPair<BoxSine, BoxCosine> {
    JordanPair::differential(BoxSine::unit(), BoxCosine, k)
}

/// Closed-form confluent partner of the box for `λ = m²π²`:
///
/// `16π²m² [1 + mπ(2K − x) sin(2mπx) − cos(2mπx)] / [2mπ(2K − x) + sin(2mπx)]²`.
pub fn box_partner_closed(m: u32, k: f64, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be a positive integer".into()));
    }
    let mp = m as f64 * PI;
    let s = (2.0 * mp * x).sin();
    let c = (2.0 * mp * x).cos();
    let denom = 2.0 * mp * (2.0 * k - x) + s;
    if denom == 0.0 {
        return Err(Error::DivisionByZero { at: x });
    }
    Ok(16.0 * mp * mp * (1.0 + mp * (2.0 * k - x) * s - c) / (denom * denom))
}

// ---------------------------------------------------------------------------
// Radial oscillator
// ---------------------------------------------------------------------------

/// `V = x² + ℓ(ℓ+1)/x²` on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPotential {
    pub ell: u32,
}

impl EnergyPotential for RadialPotential {
    fn value(&self, x: f64, _lambda: f64) -> f64 {
        let l = self.ell as f64;
        x * x + l * (l + 1.0) / (x * x)
    }
    fn domain(&self) -> Domain {
        Domain::new(0.0, f64::INFINITY)
    }
}

/// Solutions `C xᵖ e^{−x²/2} ₁F₁(α₀ − λ/4; β; x²)` of the radial oscillator.
///
/// Both Frobenius branches have this shape: `p = ℓ+1, β = ℓ+3/2` for the
/// regular one and `p = −ℓ, β = 1/2−ℓ` for the singular one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerFamily {
    pot: RadialPotential,
    coeff: f64,
    power: i32,
    alpha0: f64,
    beta: f64,
    pub series: SeriesControl,
}

impl KummerFamily {
    pub fn alpha(&self, lambda: f64) -> f64 {
        self.alpha0 - 0.25 * lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn prefactor(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::InvalidInput(format!(
                "radial oscillator evaluated at x={x}, outside (0, ∞)"
            )));
        }
        Ok(self.coeff * x.powi(self.power) * (-0.5 * x * x).exp())
    }

    // (p/x − x)
    fn log_slope(&self, x: f64) -> f64 {
        self.power as f64 / x - x
    }

    fn f(&self, a: f64, b: f64, y: f64) -> Result<f64> {
        specfun::hyp1f1(a, b, y, &self.series)
    }

    fn f_da(&self, a: f64, b: f64, y: f64) -> Result<f64> {
        specfun::hyp1f1_da(a, b, y, &self.series)
    }

    /// `h = u_x − (p/x − x) u = C xᵖ e^{−x²/2} · 2x (α/β) ₁F₁(α+1; β+1; x²)`.
    pub fn h(&self, x: f64, lambda: f64) -> Result<f64> {
        let a = self.alpha(lambda);
        let b = self.beta;
        Ok(self.prefactor(x)? * 2.0 * x * a / b * self.f(a + 1.0, b + 1.0, x * x)?)
    }

    /// `∂h/∂λ`.
    pub fn h_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        let a = self.alpha(lambda);
        let b = self.beta;
        let y = x * x;
        let d_alpha = (self.f(a + 1.0, b + 1.0, y)? + a * self.f_da(a + 1.0, b + 1.0, y)?) / b;
        Ok(-0.25 * self.prefactor(x)? * 2.0 * x * d_alpha)
    }
}

impl SolutionFamily for KummerFamily {
    fn potential(&self) -> &dyn EnergyPotential {
        &self.pot
    }

    fn u(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.prefactor(x)? * self.f(self.alpha(lambda), self.beta, x * x)?)
    }

    fn u_x(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.log_slope(x) * self.u(x, lambda)? + self.h(x, lambda)?)
    }

    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(-0.25 * self.prefactor(x)? * self.f_da(self.alpha(lambda), self.beta, x * x)?)
    }

    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.log_slope(x) * self.u_lambda(x, lambda)? + self.h_lambda(x, lambda)?)
    }
}

/// The radial oscillator with angular momentum `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOscillator {
    pub ell: u32,
    pub series: SeriesControl,
}

impl RadialOscillator {
    pub fn new(ell: u32) -> Self {
        Self {
            ell,
            series: SeriesControl::default(),
        }
    }

    pub fn potential(&self) -> RadialPotential {
        RadialPotential { ell: self.ell }
    }

    /// Regular solution `u₁ = x^{ℓ+1} e^{−x²/2} ₁F₁((2ℓ+3−λ)/4; ℓ+3/2; x²)`.
    pub fn u1(&self) -> KummerFamily {
        let l = self.ell as f64;
        KummerFamily {
            pot: self.potential(),
            coeff: 1.0,
            power: self.ell as i32 + 1,
            alpha0: (2.0 * l + 3.0) / 4.0,
            beta: l + 1.5,
            series: self.series,
        }
    }

    /// Singular solution `u₂ = −x^{−ℓ} e^{−x²/2} ₁F₁((1−2ℓ−λ)/4; 1/2−ℓ; x²)/(2ℓ+1)`,
    /// normalized so that `W_{u₁,u₂} = 1`.
    pub fn u2(&self) -> KummerFamily {
        let l = self.ell as f64;
        KummerFamily {
            pot: self.potential(),
            coeff: -1.0 / (2.0 * l + 1.0),
            power: -(self.ell as i32),
            alpha0: (1.0 - 2.0 * l) / 4.0,
            beta: 0.5 - l,
            series: self.series,
        }
    }

    /// `ε = 4n + 2ℓ + 3`. Index `n = 0` is the ground state (₁F₁(0; b; x²) = 1).
    pub fn eigenvalue(&self, n: u32) -> f64 {
        4.0 * n as f64 + 2.0 * self.ell as f64 + 3.0
    }

    /// Unnormalized bound state: [`RadialOscillator::u1`] evaluated at `eigenvalue(n)`.
    pub fn eigenfunction(&self) -> KummerFamily {
        self.u1()
    }

    /// `u(x, λ)`.
    pub fn u(&self, lambda: f64, x: f64) -> Result<f64> {
        self.u1().u(x, lambda)
    }

    /// `v = −¼ x^{ℓ+1} e^{−x²/2} ∂ₐ₁F₁(a; b; x²) − K/(2ℓ+1) x^{−ℓ} e^{−x²/2} ₁F₁(c; d; x²)`.
    pub fn v(&self, lambda: f64, k: f64, x: f64) -> Result<f64> {
        let u1 = self.u1();
        let u2 = self.u2();
        let particular = -0.25
            * u1.prefactor(x)?
            * specfun::hyp1f1_da(u1.alpha(lambda), u1.beta, x * x, &self.series)?;
        let homogeneous = -k / (2.0 * self.ell as f64 + 1.0)
            * x.powi(-(self.ell as i32))
            * (-0.5 * x * x).exp()
            * specfun::hyp1f1(u2.alpha(lambda), u2.beta, x * x, &self.series)?;
        Ok(particular + homogeneous)
    }

    pub fn h(&self, lambda: f64, x: f64) -> Result<f64> {
        self.u1().h(x, lambda)
    }

    /// `W_{u,u_λ} = u h_λ − u_λ h`.
    pub fn lambda_wronskian(&self, lambda: f64, x: f64) -> Result<f64> {
        let u1 = self.u1();
        Ok(u1.u(x, lambda)? * u1.h_lambda(x, lambda)? - u1.u_lambda(x, lambda)? * u1.h(x, lambda)?)
    }

    pub fn pair(&self, k: f64) -> JordanPair<KummerFamily, KummerFamily> {
        JordanPair::differential(self.u1(), self.u2(), k)
    }

    /// Partner potential written out with the auxiliary function `h`:
    /// `x² + ℓ(ℓ+1)/x² + [4uu_x(K + uh_λ − u_λh) + 2u⁴] / (K + uh_λ − u_λh)²`.
    pub fn partner_closed(&self, lambda: f64, k: f64, x: f64) -> Result<f64> {
        let u1 = self.u1();
        let u = u1.u(x, lambda)?;
        let u_x = u1.u_x(x, lambda)?;
        let w = k + u * u1.h_lambda(x, lambda)? - u1.u_lambda(x, lambda)? * u1.h(x, lambda)?;
        if w == 0.0 {
            return Err(Error::DivisionByZero { at: x });
        }
        Ok(self.potential().value(x, lambda) + (4.0 * u * u_x * w + 2.0 * u.powi(4)) / (w * w))
    }

    /// `∫₀ˣ u₁²` from the ₁F₁ series expression
    /// `(a/2b) x^{2ℓ+3} e^{−x²} { F(a;b) S(a+1;b+1) + F(a+1;b+1) [F(a;b)/a − S(a;b)] }`,
    /// where `S = ∂ₐ₁F₁`.
    pub fn integral_u1_squared(&self, lambda: f64, x: f64) -> Result<f64> {
        let l = self.ell as f64;
        let a = (2.0 * l + 3.0 - lambda) / 4.0;
        let b = l + 1.5;
        if a == 0.0 {
            return Err(Error::Pole("a = 0 in the u₁² integral".into()));
        }
        let y = x * x;
        let c = &self.series;
        let f = specfun::hyp1f1(a, b, y, c)?;
        let f1 = specfun::hyp1f1(a + 1.0, b + 1.0, y, c)?;
        let s = specfun::hyp1f1_da(a, b, y, c)?;
        let s1 = specfun::hyp1f1_da(a + 1.0, b + 1.0, y, c)?;
        Ok(a / (2.0 * b) * x.powi(2 * self.ell as i32 + 3) * (-y).exp() * (f * s1 + f1 * (f / a - s)))
    }

    /// The ₁F₁ series expression paired with `∫ₓ^∞ u₂²`:
    /// `−c x^{1−2ℓ} e^{−x²} / (2(2ℓ+1)² d) { F(c;d) S(c+1;d+1) + F(c+1;d+1) [F(c;d)/c − S(c;d)] }`.
    ///
    /// This equals `W_{u₂,u₂λ}(x)`, so differences of it integrate `u₂²` over any
    /// finite window: `∫ₓ^R u₂² = P(x) − P(R)`. It is the tail integral only when
    /// `u₂` decays at infinity, which for generic λ it does not.
    pub fn integral_u2_squared(&self, lambda: f64, x: f64) -> Result<f64> {
        let l = self.ell as f64;
        let c = (-2.0 * l + 1.0 - lambda) / 4.0;
        let d = -l + 0.5;
        if c == 0.0 {
            return Err(Error::Pole("c = 0 in the u₂² integral".into()));
        }
        let y = x * x;
        let ctl = &self.series;
        let f = specfun::hyp1f1(c, d, y, ctl)?;
        let f1 = specfun::hyp1f1(c + 1.0, d + 1.0, y, ctl)?;
        let s = specfun::hyp1f1_da(c, d, y, ctl)?;
        let s1 = specfun::hyp1f1_da(c + 1.0, d + 1.0, y, ctl)?;
        let pre = -c * x.powi(1 - 2 * self.ell as i32) * (-y).exp()
            / (2.0 * (2.0 * l + 1.0).powi(2) * d);
        Ok(pre * (f * s1 + f1 * (f / c - s)))
    }
}

// ---------------------------------------------------------------------------
// Energy-dependent harmonic oscillator
// ---------------------------------------------------------------------------

/// `V(x, λ) = λx²` on the real line, `V_λ = x²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EdhoPotential;

impl EnergyPotential for EdhoPotential {
    fn value(&self, x: f64, lambda: f64) -> f64 {
        lambda * x * x
    }
    fn lambda_derivative(&self, x: f64, _lambda: f64) -> f64 {
        x * x
    }
    fn is_energy_independent(&self) -> bool {
        false
    }
    fn domain(&self) -> Domain {
        Domain::REAL_LINE
    }
}

static EDHO_POTENTIAL: EdhoPotential = EdhoPotential;

pub fn edho_eigenvalue(n: u32) -> f64 {
    let s = 2.0 * n as f64 + 1.0;
    s * s
}

/// `uₙ = e^{−(2n+1)x²/2} Hₙ(√(2n+1) x)` with `n` continued to the reals through
/// `λ = (2n+1)²`, so `u_λ = (∂u/∂n)/(8n+4)`.
///
/// The Hermite order derivative is a central difference with step `order_step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdhoFamily {
    pub order_step: f64,
}

impl Default for EdhoFamily {
    fn default() -> Self {
        Self {
            order_step: specfun::DEFAULT_ORDER_STEP,
        }
    }
}

struct EdhoPoint {
    s: f64,
    n: f64,
    z: f64,
    envelope: f64,
}

impl EdhoFamily {
    fn point(&self, x: f64, lambda: f64) -> Result<EdhoPoint> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "energy-dependent oscillator needs λ > 0, got {lambda}"
            )));
        }
        let s = lambda.sqrt();
        Ok(EdhoPoint {
            s,
            n: 0.5 * (s - 1.0),
            z: s.sqrt() * x,
            envelope: (-0.5 * s * x * x).exp(),
        })
    }

    // H_n'(z) = 2n H_{n−1}(z)
    fn hermite_slope(n: f64, z: f64) -> Result<f64> {
        if n == 0.0 {
            return Ok(0.0);
        }
        Ok(2.0 * n * specfun::hermite(n - 1.0, z)?)
    }

    /// `∂uₙ/∂n` at `λ = (2n+1)²`.
    pub fn u_order_derivative(&self, x: f64, lambda: f64) -> Result<f64> {
        let p = self.point(x, lambda)?;
        let h = specfun::hermite(p.n, p.z)?;
        let hp = Self::hermite_slope(p.n, p.z)?;
        let g = specfun::dhermite_dnu(p.n, p.z, self.order_step)?;
        Ok(p.envelope * (-x * x * h + hp * x / p.s.sqrt() + g))
    }

    fn u_order_derivative_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let p = self.point(x, lambda)?;
        let rs = p.s.sqrt();
        let h = specfun::hermite(p.n, p.z)?;
        let hp = Self::hermite_slope(p.n, p.z)?;
        let hpp = 2.0 * p.z * hp - 2.0 * p.n * h;
        let g = specfun::dhermite_dnu(p.n, p.z, self.order_step)?;
        // ∂_z ∂_ν H_ν = 2H_{ν−1} + 2ν ∂_ν H_{ν−1}
        let g_prime = 2.0 * specfun::hermite(p.n - 1.0, p.z)?
            + if p.n == 0.0 {
                0.0
            } else {
                2.0 * p.n * specfun::dhermite_dnu(p.n - 1.0, p.z, self.order_step)?
            };
        let bracket = -x * x * h + hp * x / rs + g;
        let bracket_x = -2.0 * x * h - x * x * rs * hp + x * hpp + hp / rs + rs * g_prime;
        Ok(p.envelope * (-p.s * x * bracket + bracket_x))
    }
}

impl SolutionFamily for EdhoFamily {
    fn potential(&self) -> &dyn EnergyPotential {
        &EDHO_POTENTIAL
    }

    fn u(&self, x: f64, lambda: f64) -> Result<f64> {
        let p = self.point(x, lambda)?;
        Ok(p.envelope * specfun::hermite(p.n, p.z)?)
    }

    fn u_x(&self, x: f64, lambda: f64) -> Result<f64> {
        let p = self.point(x, lambda)?;
        let h = specfun::hermite(p.n, p.z)?;
        let hp = Self::hermite_slope(p.n, p.z)?;
        Ok(p.envelope * (-p.s * x * h + p.s.sqrt() * hp))
    }

    fn u_lambda(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.u_order_derivative(x, lambda)? / (4.0 * lambda.sqrt()))
    }

    fn u_lambda_x(&self, x: f64, lambda: f64) -> Result<f64> {
        Ok(self.u_order_derivative_x(x, lambda)? / (4.0 * lambda.sqrt()))
    }
}

/// The `n`-th bound state and its eigenvalue `λₙ = (2n+1)²`.
pub fn edho_state(n: u32) -> (EdhoFamily, f64) {
    (EdhoFamily::default(), edho_eigenvalue(n))
}

/// `(uₙ)_λ(x)` by the chain rule through the continuous order.
pub fn edho_u_lambda(n: u32, x: f64) -> Result<f64> {
    let (family, lambda) = edho_state(n);
    family.u_lambda(x, lambda)
}
