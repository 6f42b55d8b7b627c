use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::jacobi::{evolve, focal_report, FocalDistance, LagrangianFamily, DEFAULT_DET_TOL};
use crate::manifold::Chart;
use crate::numerics::linalg::complete_basis;
use crate::numerics::quadrature::sphere_design;

#[derive(Debug, Clone)]
pub struct ConjugateRadius {
    pub radius: FocalDistance,
    pub minimizer: Option<usize>,
    pub directions: Vec<DVector<f64>>,
    /// First conjugate time along each direction.
    pub first_times: Vec<FocalDistance>,
}

/// Unit vectors at `x` in an orthonormal basis: angles `2π(j + ½)/count` in
/// dimension two, a sphere design otherwise.
pub fn unit_directions(chart: &Chart, x: &[f64], count: usize) -> Result<Vec<DVector<f64>>> {
    let n = chart.dim();
    let g = chart.metric_at(x)?;
    let basis = complete_basis(&[], &g);
    let coeffs: Vec<DVector<f64>> = if n == 2 {
        (0..count)
            .map(|j| {
                let a = 2.0 * PI * (j as f64 + 0.5) / count as f64;
                DVector::from_vec(vec![a.cos(), a.sin()])
            })
            .collect()
    } else {
        sphere_design(n, count).into_iter().map(|(c, _)| c).collect()
    };
    Ok(coeffs
        .into_iter()
        .map(|c| basis.iter().zip(c.iter()).fold(DVector::zeros(n), |acc, (e, ci)| acc + e * *ci))
        .collect())
}

/// Minimum over `directions` of the first conjugate time of `x`.
pub fn base_conjugate_radius(chart: &Chart, x: &[f64], directions: &[DVector<f64>], t_max: f64, jobs: usize) -> Result<ConjugateRadius> {
    if directions.is_empty() {
        return Err(Error::InvalidInput("conjugate radius needs at least one direction".into()));
    }
    let firsts = crate::par_map(jobs, directions, |_, v| -> Result<FocalDistance> {
        let ev = evolve(&LagrangianFamily::point_source(chart, x, v)?, t_max)?;
        Ok(focal_report(&ev, t_max, DEFAULT_DET_TOL).first)
    });
    let mut first_times = Vec::with_capacity(firsts.len());
    for f in firsts {
        first_times.push(f?);
    }
    let mut radius = first_times[0];
    let mut minimizer = Some(0);
    for (i, f) in first_times.iter().enumerate().skip(1) {
        if f.min(radius) != radius {
            radius = *f;
            minimizer = Some(i);
        }
    }
    if !radius.is_finite() {
        minimizer = None;
    }
    Ok(ConjugateRadius { radius, minimizer, directions: directions.to_vec(), first_times })
}
