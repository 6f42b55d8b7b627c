//! Gauss–Legendre rules and deterministic sphere designs.

use nalgebra::DVector;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n > 0, "at least one node");
    let mut out = Vec::with_capacity(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        // Newton iteration on P_n from the Chebyshev-like initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((mid - half * x, half * w));
    }
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Area of the unit sphere `S^{d-1}` in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

/// Deterministic, roughly uniform design of `count` unit vectors in `R^d`
/// with equal quadrature weights summing to the sphere area.
///
/// `d = 1` gives `{+1, -1}`; `d = 2` equally spaced angles; `d = 3` a
/// Fibonacci lattice; higher `d` normalized Halton points.
pub fn sphere_design(d: usize, count: usize) -> Vec<(DVector<f64>, f64)> {
    let pts: Vec<DVector<f64>> = match d {
        0 => Vec::new(),
        1 => vec![DVector::from_vec(vec![1.0]), DVector::from_vec(vec![-1.0])],
        2 => (0..count)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / count as f64;
                DVector::from_vec(vec![a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let a = golden * i as f64;
                    DVector::from_vec(vec![r * a.cos(), r * a.sin(), z])
                })
                .collect()
        }
        _ => {
            const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
            let mut pts = Vec::with_capacity(count);
            let mut i = 1u64;
            while pts.len() < count {
                let v = DVector::from_iterator(d, (0..d).map(|j| 2.0 * halton(i, PRIMES[j % 12]) - 1.0));
                let n = v.norm();
                if n > 1e-3 && n <= 1.0 {
                    pts.push(v / n);
                }
                i += 1;
            }
            pts
        }
    };
    let w = if pts.is_empty() { 0.0 } else { sphere_area(d) / pts.len() as f64 };
    pts.into_iter().map(|p| (p, w)).collect()
}

fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = gauss_legendre(5, 0.0, 2.0);
        for p in 0..10 {
            let approx: f64 = rule.iter().map(|(x, w)| w * x.powi(p)).sum();
            let exact = 2f64.powi(p + 1) / (p + 1) as f64;
            assert!((approx - exact).abs() < 1e-12 * exact.max(1.0), "p={p}");
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn designs_are_unit_and_weighted() {
        for d in 1..=4 {
            let design = sphere_design(d, 64);
            let total: f64 = design.iter().map(|(_, w)| w).sum();
            assert!((total - sphere_area(d)).abs() < 1e-12);
            assert!(design.iter().all(|(v, _)| (v.norm() - 1.0).abs() < 1e-14));
        }
    }
}
