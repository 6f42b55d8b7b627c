//! Scalar root bracketing and one-dimensional minimization.

use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket until its width is at most `tol`.
pub fn bracketed_root<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange { a, b });
    }
    let tol = tol.max(f64::EPSILON * a.abs().max(b.abs()));
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section search for a local minimum on `[a, b]`; returns `(t, f(t))`.
pub fn golden_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    let ft = f(t);
    [(t, ft), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn linear_root() {
        assert!((bracketed_root(|t| t - 1.0, (0.0, 2.0), 1e-12).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_root() {
        let r = bracketed_root(f64::cos, (1.0, 2.0), 1e-12).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn sine_determinant_root() {
        // det(sin(t) I_2) changes sign only through a double zero, so use the
        // odd-dimensional case det(sin(t) I_3) = sin^3 t.
        let r = bracketed_root(|t| t.sin().powi(3), (3.0, 3.3), 1e-12).unwrap();
        assert!((r - PI).abs() < 1e-11);
    }

    #[test]
    fn missing_sign_change() {
        assert!(matches!(
            bracketed_root(|t| t * t + 1.0, (-1.0, 1.0), 1e-9),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn golden_section_finds_v_shape() {
        let (t, v) = golden_min(|t| (t - 0.7).abs(), 0.5, 1.0, 1e-12);
        assert!((t - 0.7).abs() < 1e-11 && v < 1e-11);
    }
}
