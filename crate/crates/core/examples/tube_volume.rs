//! Tube volumes by integrating |det A| over normal directions and radii.

use std::f64::consts::{FRAC_PI_2, PI};

use focallab::comparison::{tube_volume, TubeQuadrature};
use focallab::manifold::charts;
use focallab::scenarios::embeddings;

fn main() -> focallab::Result<()> {
    let strip = embeddings::torus_line("flat_torus_circle", charts::flat_torus(2), vec![0.0, 0.3], vec![1.0, 1.0]);
    let circle = embeddings::planar_circle("circle", charts::euclidean(2), 1.0);
    let equator = embeddings::great_circle_line("equator", charts::sphere(2, 1.0), 1);
    let ring = embeddings::planar_circle("ring", charts::euclidean(3), 2.0);
    let cases = [
        (&strip, 0.2, TubeQuadrature::uniform(1, 16, 1, 8), 2.0 * 0.2 * 2f64.sqrt()),
        (&circle, 0.5, TubeQuadrature::uniform(1, 64, 1, 16), 2.0 * PI),
        (&equator, FRAC_PI_2, TubeQuadrature::uniform(1, 64, 1, 24), 4.0 * PI),
        (&ring, 0.5, TubeQuadrature::uniform(1, 32, 16, 12), 2.0 * PI * PI * 2.0 * 0.25),
    ];
    for (sub, r, q, exact) in cases {
        let t = tube_volume(sub, r, &q, 1)?;
        println!(
            "{:<18} r = {r:.4}  volume {:.10}  exact {:.10}  rel err {:.2e}  quad est {:.2e}  focal inside {}",
            sub.name(),
            t.value,
            exact,
            (t.value - exact).abs() / exact,
            t.error_estimate,
            t.focal_inside
        );
    }
    Ok(())
}
