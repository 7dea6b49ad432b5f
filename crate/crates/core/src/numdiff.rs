//! Five-point finite-difference stencils.

use crate::error::Result;

/// `f'(x) ≈ [−f(x+2h) + 8f(x+h) − 8f(x−h) + f(x−2h)] / 12h`.
pub fn first_derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h))
}

/// `f''(x) ≈ [−f(x+2h) + 16f(x+h) − 30f(x) + 16f(x−h) − f(x−2h)] / 12h²`.
pub fn second_derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((-f(x + 2.0 * h)? + 16.0 * f(x + h)? - 30.0 * f(x)? + 16.0 * f(x - h)? - f(x - 2.0 * h)?)
        / (12.0 * h * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_on_exponential() {
        let d1 = first_derivative(|x| Ok(x.exp()), 0.3, 1e-3).unwrap();
        let d2 = second_derivative(|x| Ok(x.exp()), 0.3, 1e-3).unwrap();
        assert!((d1 - 0.3f64.exp()).abs() < 1e-11);
        assert!((d2 - 0.3f64.exp()).abs() < 1e-8);
    }
}
