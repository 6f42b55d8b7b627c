use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::jacobi::{evolve, focal_report, lambda_n, DEFAULT_DET_TOL};
use crate::numerics::quadrature::{gauss_legendre, sphere_design};
use crate::submanifold::EmbeddedSubmanifold;

/// Resolution of the tube quadrature: per-parameter nodes (midpoint for
/// periodic coordinates, Gauss–Legendre otherwise), normal directions in
/// codimension above one, and Gauss–Legendre radial nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeQuadrature {
    pub param_counts: Vec<usize>,
    pub normal_dirs: usize,
    pub radial_nodes: usize,
}

impl TubeQuadrature {
    pub fn uniform(m: usize, per_param: usize, normal_dirs: usize, radial_nodes: usize) -> Self {
        TubeQuadrature { param_counts: vec![per_param; m], normal_dirs, radial_nodes }
    }

    fn coarsened(&self) -> Self {
        let half = |n: usize| (n / 2).max(1);
        TubeQuadrature {
            param_counts: self.param_counts.iter().map(|n| half(*n)).collect(),
            normal_dirs: half(self.normal_dirs),
            radial_nodes: half(self.radial_nodes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeVolume {
    pub radius: f64,
    pub value: f64,
    /// Value at half resolution.
    pub coarse_value: f64,
    /// `|value − coarse_value|`.
    pub error_estimate: f64,
    /// Some sampled normal geodesic has a focal point before `radius`.
    pub focal_inside: bool,
}

/// `∫_N ∫_{|v|=1} ∫_0^r |det A_v(t)| dt dv dvol_N` with `A_v` the Jacobi
/// matrix of `Λ_N`.
pub fn tube_volume(sub: &EmbeddedSubmanifold, radius: f64, quad: &TubeQuadrature, jobs: usize) -> Result<TubeVolume> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("tube radius must be positive, got {radius}")));
    }
    if quad.param_counts.len() != sub.param_dim() {
        return Err(Error::DimensionMismatch { expected: sub.param_dim(), got: quad.param_counts.len() });
    }
    let (value, focal_inside) = integrate(sub, radius, quad, jobs)?;
    let (coarse_value, _) = integrate(sub, radius, &quad.coarsened(), jobs)?;
    Ok(TubeVolume { radius, value, coarse_value, error_estimate: (value - coarse_value).abs(), focal_inside })
}

fn param_rule(sub: &EmbeddedSubmanifold, counts: &[usize]) -> Vec<(Vec<f64>, f64)> {
    let d = sub.domain();
    let mut rule: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for (i, &n) in counts.iter().enumerate() {
        let (a, b) = (d.lower[i], d.upper[i]);
        let one: Vec<(f64, f64)> = if d.periodic[i] {
            let h = (b - a) / n as f64;
            (0..n).map(|j| (a + (j as f64 + 0.5) * h, h)).collect()
        } else {
            gauss_legendre(n, a, b)
        };
        rule = rule
            .into_iter()
            .flat_map(|(u, w)| {
                one.iter().map(move |(x, wx)| {
                    let mut u = u.clone();
                    u.push(*x);
                    (u, w * wx)
                })
            })
            .collect();
    }
    rule
}

struct Node {
    u: Vec<f64>,
    v: DVector<f64>,
    weight: f64,
}

fn integrate(sub: &EmbeddedSubmanifold, radius: f64, quad: &TubeQuadrature, jobs: usize) -> Result<(f64, bool)> {
    let codim = sub.codim();
    let design = sphere_design(codim, quad.normal_dirs.max(1));
    let mut nodes = Vec::new();
    for (u, w) in param_rule(sub, &quad.param_counts) {
        let split = sub.tangent_normal_split(&u)?;
        let j = sub.jacobian(&u)?;
        let induced = j.transpose() * &split.metric * &j;
        let dvol = induced.determinant().max(0.0).sqrt();
        for (c, wc) in &design {
            nodes.push(Node { v: split.normal_from(c.as_slice()), u: u.clone(), weight: w * dvol * wc });
        }
    }
    let radial = gauss_legendre(quad.radial_nodes.max(1), 0.0, radius);
    let parts = crate::par_map(jobs, &nodes, |_, node| -> Result<(f64, bool)> {
        let ev = evolve(&lambda_n(sub, &node.u, &node.v)?, radius)?;
        let inside = focal_report(&ev, radius, DEFAULT_DET_TOL).focal_times.iter().any(|f| f.t < radius * (1.0 - 1e-9));
        let mut s = 0.0;
        for (t, wt) in &radial {
            s += wt * ev.det(*t)?.abs();
        }
        Ok((node.weight * s, inside))
    });
    let mut total = 0.0;
    let mut inside = false;
    for p in parts {
        let (v, f) = p?;
        total += v;
        inside |= f;
    }
    Ok((total, inside))
}
