//! Ready-made charts for the standard model geometries.

use nalgebra::DMatrix;

use super::chart::{Chart, MetricJet};

fn sq_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Jet of `φ δ` with `φ = c / (1 + ε|x|²)²`.
fn stereographic_jet(x: &[f64], c: f64, eps: f64) -> MetricJet {
    let n = x.len();
    let s = 1.0 + eps * sq_norm(x);
    let phi = c / (s * s);
    let grad: Vec<f64> = x.iter().map(|xa| -4.0 * c * eps * xa / s.powi(3)).collect();
    let hess = DMatrix::from_fn(n, n, |a, b| {
        let delta = if a == b { 1.0 } else { 0.0 };
        -4.0 * c * eps * delta / s.powi(3) + 24.0 * c * x[a] * x[b] / s.powi(4)
    });
    MetricJet::conformal(phi, &grad, &hess)
}

fn flat_jet(n: usize) -> MetricJet {
    MetricJet {
        g: DMatrix::identity(n, n),
        dg: vec![DMatrix::zeros(n, n); n],
        ddg: vec![DMatrix::zeros(n, n); n * n],
    }
}

/// Euclidean space `R^n` in Cartesian coordinates.
pub fn euclidean(n: usize) -> Chart {
    Chart::new(format!("euclidean{n}"), n, move |_| DMatrix::identity(n, n)).with_analytic_jet(move |_| flat_jet(n))
}

/// Flat torus `R^n / Z^n` in its universal-cover coordinates.
pub fn flat_torus(n: usize) -> Chart {
    euclidean(n).with_name(format!("flat_torus{n}"))
}

/// Round sphere of radius `radius` through stereographic projection from the
/// north pole; the chart origin is the south pole.
pub fn sphere(n: usize, radius: f64) -> Chart {
    let c = 4.0 * radius * radius;
    Chart::new(format!("sphere{n}(r={radius})"), n, move |x| {
        let s = 1.0 + sq_norm(x);
        DMatrix::identity(n, n) * (c / (s * s))
    })
    .with_analytic_jet(move |x| stereographic_jet(x, c, 1.0))
}

/// Hyperbolic space in the Poincaré ball model.
pub fn hyperbolic_ball(n: usize) -> Chart {
    Chart::new(format!("hyperbolic_ball{n}"), n, move |x| {
        let s = 1.0 - sq_norm(x);
        DMatrix::identity(n, n) * (4.0 / (s * s))
    })
    .with_analytic_jet(move |x| stereographic_jet(x, 4.0, -1.0))
    .with_domain(|x| sq_norm(x) < 1.0)
}

/// Hyperbolic space as the graph `x ↦ (x, √(1+|x|²))` over the hyperboloid,
/// with the induced metric `δ − x xᵀ / (1 + |x|²)`. Derivatives by central
/// differences.
pub fn hyperboloid(n: usize) -> Chart {
    Chart::new(format!("hyperboloid{n}"), n, move |x| {
        let xv = nalgebra::DVector::from_column_slice(x);
        DMatrix::identity(n, n) - &xv * xv.transpose() / (1.0 + sq_norm(x))
    })
}

/// Flat plane in polar coordinates `(r, θ)`.
pub fn polar_plane() -> Chart {
    Chart::new("polar_plane", 2, |x| DMatrix::from_diagonal(&nalgebra::dvector![1.0, x[0] * x[0]]))
        .with_domain(|x| x[0] > 0.0)
}

/// Unit sphere `S²` in spherical coordinates `(θ, φ)`.
pub fn sphere_polar() -> Chart {
    Chart::new("sphere_polar", 2, |x| DMatrix::from_diagonal(&nalgebra::dvector![1.0, x[0].sin().powi(2)]))
        .with_domain(|x| x[0] > 0.0 && x[0] < std::f64::consts::PI)
}

/// Riemannian product of the unit `S²` (stereographic) with a line.
pub fn s2_times_r() -> Chart {
    Chart::new("s2_times_r", 3, |x| {
        let s = 1.0 + x[0] * x[0] + x[1] * x[1];
        let phi = 4.0 / (s * s);
        DMatrix::from_diagonal(&nalgebra::dvector![phi, phi, 1.0])
    })
}

/// A non-homogeneous metric with no symmetry, for stress tests.
pub fn bumpy(n: usize) -> Chart {
    Chart::new(format!("bumpy{n}"), n, move |x| {
        DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { 1.0 + 0.3 * x[i].sin().powi(2) } else { 0.0 };
            diag + 0.1 * (x[i] - x[j]).cos() * (x[i] + x[j]).sin() * if i == j { 0.0 } else { 1.0 }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{christoffel, riemann, DerivativeScheme};

    fn analytic_charts() -> Vec<(Chart, Vec<f64>)> {
        vec![
            (sphere(2, 1.0), vec![0.3, -0.4]),
            (sphere(3, 1.0), vec![0.2, 0.5, -0.1]),
            (sphere(3, 0.5), vec![-0.6, 0.1, 0.3]),
            (hyperbolic_ball(3), vec![0.1, -0.3, 0.4]),
            (euclidean(3), vec![1.0, 2.0, 3.0]),
        ]
    }

    #[test]
    fn finite_difference_christoffel_matches_analytic() {
        for (chart, x) in analytic_charts() {
            let fd = chart.clone().with_scheme(DerivativeScheme::DEFAULT_FD);
            let a = christoffel(&chart, &x).unwrap();
            let b = christoffel(&fd, &x).unwrap();
            let n = chart.dim();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        assert!((a.get(k, i, j) - b.get(k, i, j)).abs() < 1e-6, "{}", chart.name());
                    }
                }
            }
        }
    }

    #[test]
    fn christoffel_is_symmetric() {
        let c = bumpy(3);
        let g = christoffel(&c, &[0.4, 1.1, -0.2]).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!((g.get(k, i, j) - g.get(k, j, i)).abs() < 1e-12);
                }
            }
        }
    }

    fn check_symmetries(chart: &Chart, x: &[f64], tol: f64) {
        let r = riemann(chart, x).unwrap();
        let n = chart.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = r.lower(i, j, k, l);
                        assert!((v + r.lower(j, i, k, l)).abs() < tol);
                        assert!((v + r.lower(i, j, l, k)).abs() < tol);
                        assert!((v - r.lower(k, l, i, j)).abs() < tol);
                        let bianchi = v + r.lower(j, k, i, l) + r.lower(k, i, j, l);
                        assert!(bianchi.abs() < tol, "{}: bianchi {bianchi}", chart.name());
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_symmetries_analytic() {
        for (chart, x) in analytic_charts() {
            check_symmetries(&chart, &x, 1e-10);
        }
    }

    #[test]
    fn curvature_symmetries_finite_difference() {
        check_symmetries(&bumpy(3), &[0.3, -0.8, 1.2], 1e-6);
        check_symmetries(&hyperboloid(3), &[0.3, -0.2, 0.5], 1e-6);
        check_symmetries(&s2_times_r(), &[0.3, -0.2, 0.5], 1e-6);
    }

    #[test]
    fn charts_are_positive_definite_on_samples() {
        for chart in [bumpy(4), hyperboloid(4), s2_times_r(), sphere(4, 2.0)] {
            for x in [[0.0; 4], [1.0, -2.0, 0.5, 3.0]] {
                let x = &x[..chart.dim()];
                assert!(chart.metric_at(x).is_ok(), "{}", chart.name());
            }
        }
    }
}
