//! Catalog submanifolds with analytic derivatives.

use std::f64::consts::PI;

use nalgebra::{dvector, DMatrix, DVector};

use crate::manifold::Chart;
use crate::submanifold::{EmbeddedSubmanifold, ParamDomain};

/// Round sphere `a·(sin θ cos φ, sin θ sin φ, cos θ)` about the chart origin.
/// The poles of the parametrization are cut off at `θ ∈ [0.1, π − 0.1]`.
pub fn coordinate_sphere(name: &str, chart: Chart, a: f64) -> EmbeddedSubmanifold {
    EmbeddedSubmanifold::new(
        name,
        chart,
        ParamDomain::new(vec![0.1, 0.0], vec![PI - 0.1, 2.0 * PI], vec![false, true]),
        move |u| dvector![a * u[0].sin() * u[1].cos(), a * u[0].sin() * u[1].sin(), a * u[0].cos()],
    )
    .with_derivatives(
        move |u| {
            let (st, ct, sp, cp) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
            DMatrix::from_row_slice(3, 2, &[a * ct * cp, -a * st * sp, a * ct * sp, a * st * cp, -a * st, 0.0])
        },
        move |u| {
            let (st, ct, sp, cp) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
            let tt = dvector![-a * st * cp, -a * st * sp, -a * ct];
            let tp = dvector![-a * ct * sp, a * ct * cp, 0.0];
            let pp = dvector![-a * st * cp, -a * st * sp, 0.0];
            vec![tt, tp.clone(), tp, pp]
        },
    )
}

/// Circle of radius `r` in the first coordinate plane of an `n`-dimensional chart.
pub fn planar_circle(name: &str, chart: Chart, r: f64) -> EmbeddedSubmanifold {
    let n = chart.dim();
    let pad = move |x: f64, y: f64| {
        let mut v = DVector::zeros(n);
        v[0] = x;
        v[1] = y;
        v
    };
    EmbeddedSubmanifold::new(name, chart, ParamDomain::periodic(1, 2.0 * PI), move |u| pad(r * u[0].cos(), r * u[0].sin()))
        .with_derivatives(
            move |u| DMatrix::from_column_slice(n, 1, pad(-r * u[0].sin(), r * u[0].cos()).as_slice()),
            move |u| vec![pad(-r * u[0].cos(), -r * u[0].sin())],
        )
}

/// Coordinate line `x ↦ x e_axis` through the chart origin written as
/// `θ ↦ tan(θ/2) e_axis`; in a stereographic sphere chart this is a full
/// great circle with `θ = ±π` at the projection pole.
pub fn great_circle_line(name: &str, chart: Chart, axis: usize) -> EmbeddedSubmanifold {
    let n = chart.dim();
    let along = move |c: f64| {
        let mut v = DVector::zeros(n);
        v[axis] = c;
        v
    };
    EmbeddedSubmanifold::new(name, chart, ParamDomain::new(vec![-PI], vec![PI], vec![true]), move |u| along((u[0] / 2.0).tan()))
        .with_derivatives(
            move |u| {
                let s2 = 1.0 / (u[0] / 2.0).cos().powi(2);
                DMatrix::from_column_slice(n, 1, along(0.5 * s2).as_slice())
            },
            move |u| {
                let h = u[0] / 2.0;
                vec![along(0.5 * h.tan() / h.cos().powi(2))]
            },
        )
}

/// Coordinate hyperplane `x_0 = 0` through the chart origin.
pub fn coordinate_hyperplane(name: &str, chart: Chart, half_width: f64) -> EmbeddedSubmanifold {
    let n = chart.dim();
    let m = n - 1;
    EmbeddedSubmanifold::new(
        name,
        chart,
        ParamDomain::new(vec![-half_width; m], vec![half_width; m], vec![false; m]),
        move |u| {
            let mut v = DVector::zeros(n);
            v.rows_mut(1, m).copy_from_slice(u);
            v
        },
    )
    .with_derivatives(
        move |_| {
            let mut j = DMatrix::zeros(n, m);
            for a in 0..m {
                j[(a + 1, a)] = 1.0;
            }
            j
        },
        move |_| vec![DVector::zeros(n); m * m],
    )
}

/// Closed geodesic `u ↦ base + u·class` of the flat torus `R^n/Z^n`, `u ∈ [0, 1)`.
pub fn torus_line(name: &str, chart: Chart, base: Vec<f64>, class: Vec<f64>) -> EmbeddedSubmanifold {
    let n = chart.dim();
    let c = DVector::from_vec(class);
    let b = DVector::from_vec(base);
    let c2 = c.clone();
    EmbeddedSubmanifold::new(name, chart, ParamDomain::periodic(1, 1.0), move |u| &b + &c * u[0])
        .with_derivatives(move |_| DMatrix::from_column_slice(n, 1, c2.as_slice()), move |_| vec![DVector::zeros(n)])
}

/// Graph `u ↦ (u, y0 + amp·sin 2πu)` in the flat 2-torus.
pub fn torus_wave(name: &str, chart: Chart, y0: f64, amp: f64) -> EmbeddedSubmanifold {
    let w = 2.0 * PI;
    EmbeddedSubmanifold::new(name, chart, ParamDomain::periodic(1, 1.0), move |u| dvector![u[0], y0 + amp * (w * u[0]).sin()])
        .with_derivatives(
            move |u| DMatrix::from_column_slice(2, 1, &[1.0, amp * w * (w * u[0]).cos()]),
            move |u| vec![dvector![0.0, -amp * w * w * (w * u[0]).sin()]],
        )
}

/// Clifford torus `(cos a, sin a, cos b, sin b)/√2 ⊂ S³ ⊂ R⁴`, reflected so
/// that `q = (−sin π/8, 0, −cos π/8, 0)` becomes the projection pole `e₄`,
/// then mapped to the stereographic chart `y ↦ (y₁, y₂, y₃)/(1 − y₄)`.
pub fn clifford_torus(name: &str, chart: Chart) -> EmbeddedSubmanifold {
    let q = dvector![-(PI / 8.0).sin(), 0.0, -(PI / 8.0).cos(), 0.0];
    let w = &q - dvector![0.0, 0.0, 0.0, 1.0];
    let h: DMatrix<f64> = DMatrix::identity(4, 4) - &w * w.transpose() * (2.0 / w.norm_squared());
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let lift = move |u: &[f64]| -> [DVector<f64>; 6] {
        let (sa, ca, sb, cb) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
        [
            dvector![ca, sa, cb, sb] * r,
            dvector![-sa, ca, 0.0, 0.0] * r,
            dvector![0.0, 0.0, -sb, cb] * r,
            dvector![-ca, -sa, 0.0, 0.0] * r,
            DVector::zeros(4),
            dvector![0.0, 0.0, -cb, -sb] * r,
        ]
    };
    // y = H·P and its derivatives: [y, y_a, y_b, y_aa, y_ab, y_bb]
    let ys = {
        let h = h.clone();
        move |u: &[f64]| -> Vec<DVector<f64>> { lift(u).iter().map(|p| &h * p).collect() }
    };
    let split = |y: &DVector<f64>| (y.rows(0, 3).into_owned(), y[3]);
    let ys1 = ys.clone();
    let ys2 = ys.clone();
    EmbeddedSubmanifold::new(name, chart, ParamDomain::periodic(2, 2.0 * PI), move |u| {
        let y = &ys(u)[0];
        let (bar, y4) = split(y);
        bar / (1.0 - y4)
    })
    .with_derivatives(
        move |u| {
            let d = ys1(u);
            let (bar, y4) = split(&d[0]);
            let s = 1.0 - y4;
            let mut j = DMatrix::zeros(3, 2);
            for (col, dy) in [&d[1], &d[2]].into_iter().enumerate() {
                let (dbar, dy4) = split(dy);
                j.set_column(col, &(dbar / s + &bar * (dy4 / (s * s))));
            }
            j
        },
        move |u| {
            let d = ys2(u);
            let (bar, y4) = split(&d[0]);
            let s = 1.0 - y4;
            let first = [split(&d[1]), split(&d[2])];
            let second = [[&d[3], &d[4]], [&d[4], &d[5]]];
            let mut out = Vec::with_capacity(4);
            for a in 0..2 {
                for b in 0..2 {
                    let (bar_ab, y4_ab) = split(second[a][b]);
                    let (bar_a, y4_a) = &first[a];
                    let (bar_b, y4_b) = &first[b];
                    let v = bar_ab / s
                        + (bar_a * *y4_b + bar_b * *y4_a) / (s * s)
                        + &bar * (y4_ab / (s * s) + 2.0 * y4_a * y4_b / (s * s * s));
                    out.push(v);
                }
            }
            out
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::charts;

    /// Analytic derivatives against central differences of the embedding.
    fn check_derivatives(sub: &EmbeddedSubmanifold, u: &[f64]) {
        let m = sub.param_dim();
        let j = sub.jacobian(u).unwrap();
        let hs = sub.hessian(u).unwrap();
        let h = 1e-5;
        for a in 0..m {
            let mut up = u.to_vec();
            let mut um = u.to_vec();
            up[a] += h;
            um[a] -= h;
            let fd = (sub.point(&up).unwrap() - sub.point(&um).unwrap()) / (2.0 * h);
            assert!((fd - j.column(a)).norm() < 1e-7, "{} jacobian column {a}", sub.name());
            let fdj = (sub.jacobian(&up).unwrap() - sub.jacobian(&um).unwrap()) / (2.0 * h);
            for b in 0..m {
                assert!((fdj.column(b) - &hs[a * m + b]).norm() < 1e-6, "{} hessian {a}{b}", sub.name());
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        check_derivatives(&coordinate_sphere("s", charts::sphere(3, 1.0), 0.4), &[0.7, 1.1]);
        check_derivatives(&planar_circle("c", charts::euclidean(3), 1.3), &[0.4]);
        check_derivatives(&great_circle_line("g", charts::sphere(2, 1.0), 1), &[0.9]);
        check_derivatives(&coordinate_hyperplane("p", charts::sphere(3, 1.0), 3.0), &[0.2, -0.5]);
        check_derivatives(&torus_line("l", charts::flat_torus(2), vec![0.0, 0.3], vec![1.0, 1.0]), &[0.4]);
        check_derivatives(&torus_wave("w", charts::flat_torus(2), 0.5, 0.05), &[0.3]);
        check_derivatives(&clifford_torus("t", charts::sphere(3, 1.0)), &[0.8, 2.3]);
    }

    #[test]
    fn clifford_torus_lies_on_the_torus() {
        let t = clifford_torus("t", charts::sphere(3, 1.0));
        let q = dvector![-(PI / 8.0).sin(), 0.0, -(PI / 8.0).cos(), 0.0];
        let w = &q - dvector![0.0, 0.0, 0.0, 1.0];
        let h: DMatrix<f64> = DMatrix::identity(4, 4) - &w * w.transpose() * (2.0 / w.norm_squared());
        for (a, b) in [(0.3, 0.4), (PI / 4.0, 3.0 * PI / 4.0), (5.0, 1.0)] {
            let x = t.point(&[a, b]).unwrap();
            let s = 1.0 + x.norm_squared();
            let y = DVector::from_iterator(4, x.iter().map(|v| 2.0 * v / s).chain(std::iter::once((x.norm_squared() - 1.0) / s)));
            let p = &h * y;
            assert!((p[0] * p[0] + p[1] * p[1] - 0.5).abs() < 1e-12);
            assert!((p[0] - a.cos() / 2f64.sqrt()).abs() < 1e-12);
        }
    }
}
