//! Sectional curvature and Ric_k on the model charts and a user-defined metric.

use focallab::manifold::{charts, ric_k, sectional_curvature, Chart};
use nalgebra::{dvector, DMatrix};

fn main() -> focallab::Result<()> {
    let x = [0.2, -0.1, 0.3];
    let u = dvector![1.0, 0.0, 0.0];
    let w = dvector![0.0, 1.0, 0.0];
    println!("{:<24} {:>12} {:>12} {:>12}", "chart", "sec(e0,e1)", "Ric_1(e0)", "Ric_2(e0)");
    let warped = Chart::new("warped_product", 3, |x: &[f64]| {
        let f = (1.0 + 0.5 * x[0] * x[0]).powi(2);
        DMatrix::from_diagonal(&dvector![1.0, f, f])
    });
    for chart in [charts::euclidean(3), charts::sphere(3, 1.0), charts::sphere(3, 0.5), charts::hyperbolic_ball(3), charts::s2_times_r(), warped] {
        println!(
            "{:<24} {:>12.8} {:>12.8} {:>12.8}",
            chart.name(),
            sectional_curvature(&chart, &x, &u, &w)?,
            ric_k(&chart, &x, &u, 1)?,
            ric_k(&chart, &x, &u, 2)?,
        );
    }
    Ok(())
}
