//! A user-defined curve in a user-defined chart, with derivatives left to
//! central differences.

use focallab::jacobi::{focal_radius, normal_samples};
use focallab::manifold::{charts, Chart};
use focallab::submanifold::{second_fundamental_form_norm, EmbeddedSubmanifold, ParamDomain};
use nalgebra::{dvector, DMatrix};

fn main() -> focallab::Result<()> {
    // ellipse in the Euclidean plane
    let ellipse = EmbeddedSubmanifold::new(
        "ellipse",
        charts::euclidean(2),
        ParamDomain::periodic(1, std::f64::consts::TAU),
        |u: &[f64]| dvector![2.0 * u[0].cos(), u[0].sin()],
    );
    let params: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64 * std::f64::consts::TAU / 16.0]).collect();
    let r = focal_radius(&ellipse, &normal_samples(&ellipse, &params, 1)?, 4.0, 4)?;
    // minimal radius of curvature b^2/a = 0.5 at the ends of the major axis
    println!("ellipse focal radius {} (expected 0.5)", r.radius);
    println!("|II| at the vertex {:.8} (expected 2)", second_fundamental_form_norm(&ellipse, &[0.0])?);

    // a conformally flat metric given only by its callback
    let chart = Chart::new("conformal", 2, |x: &[f64]| DMatrix::identity(2, 2) * (1.0 + 0.2 * x[0] * x[0]));
    let line = EmbeddedSubmanifold::new("axis", chart, ParamDomain::new(vec![-1.0], vec![1.0], vec![false]), |u: &[f64]| dvector![0.0, u[0]]);
    println!("|II| of x = 0 in the conformal chart {:.3e}", second_fundamental_form_norm(&line, &[0.3])?);
    Ok(())
}
