//! Focal radii from the Jacobi evolution of normal Lagrangian families.

use focallab::jacobi::{focal_radius, normal_samples};
use focallab::manifold::charts;
use focallab::scenarios::embeddings;

fn main() -> focallab::Result<()> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rho: f64 = 0.7;
    let subjects = [
        (embeddings::coordinate_sphere("geodesic_sphere", charts::sphere(3, 1.0), (rho / 2.0).tan()), vec![vec![1.0, 0.0], vec![2.0, 3.0]]),
        (embeddings::coordinate_hyperplane("equator_S2_in_S3", charts::sphere(3, 1.0), 1.0), vec![vec![0.0, 0.0], vec![0.3, -0.4]]),
        (embeddings::clifford_torus("clifford_torus", charts::sphere(3, 1.0)), vec![vec![0.7, 0.9]]),
        (embeddings::torus_line("flat_torus_circle", charts::flat_torus(2), vec![0.0, 0.3], vec![1.0, 1.0]), vec![vec![0.0], vec![0.5]]),
        (embeddings::torus_wave("flat_torus_wavy_curve", charts::flat_torus(2), 0.5, 0.05), (0..8).map(|i| vec![i as f64 / 8.0]).collect()),
    ];
    for (sub, params) in &subjects {
        let samples = normal_samples(sub, params, 8)?;
        let r = focal_radius(sub, &samples, 3.0, jobs)?;
        println!("{:<24} focal radius {}", sub.name(), r.radius);
    }
    Ok(())
}
