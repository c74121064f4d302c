//! Small numerical helpers shared inside the crate.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Adaptive Simpson quadrature for a complex-valued integrand.
///
/// Recursion halves intervals until the local Richardson estimate meets the
/// interval's share of the requested tolerance. Depth is capped; exceeding it
/// is reported as a numerical error with the offending interval.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    // Scale the absolute budget off a first coarse magnitude estimate.
    let scale = whole.norm().max(1e-300);
    let eps = rel_tol * scale;
    let result = recurse(f, a, b, fa, fm, fb, whole, eps, 48)?;
    if !result.re.is_finite() || !result.im.is_finite() {
        return Err(Error::Numerics(format!(
            "quadrature produced non-finite value on [{a}, {b}]"
        )));
    }
    Ok(result)
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    eps: f64,
    depth: u32,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerics(format!(
            "quadrature did not converge on [{a}, {b}] (residual {:.3e})",
            delta.norm()
        )));
    }
    let half = recurse(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)?;
    let other = recurse(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)?;
    Ok(half + other)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_gaussian() {
        let f = |x: f64| Complex64::new((-x * x).exp(), 0.0);
        let got = adaptive_simpson(&f, -8.0, 8.0, 1e-10).unwrap();
        let expected = std::f64::consts::PI.sqrt();
        assert!((got.re - expected).abs() < 1e-9);
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn integrates_oscillatory() {
        // ∫ e^{i x} dx over [0, 2π] = 0
        let f = |x: f64| Complex64::new(0.0, x).exp();
        let got = adaptive_simpson(&f, 0.0, 2.0 * std::f64::consts::PI, 1e-10).unwrap();
        assert!(got.norm() < 1e-9);
    }
}
