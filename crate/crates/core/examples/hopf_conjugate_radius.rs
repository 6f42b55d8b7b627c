//! Conjugate radii of submersion bases: the Hopf base S^2(1/2), the unit
//! 2-sphere and the plane.

use focallab::comparison::{base_conjugate_radius, unit_directions};
use focallab::manifold::charts;

fn main() -> focallab::Result<()> {
    for (chart, t_max) in [(charts::sphere(2, 0.5), 2.0), (charts::sphere(2, 1.0), 3.5), (charts::euclidean(2), 10.0)] {
        let x = [1.0, 0.0];
        let dirs = unit_directions(&chart, &x, 8)?;
        let r = base_conjugate_radius(&chart, &x, &dirs, t_max, 4)?;
        println!("{:<22} conjugate radius {}", chart.name(), r.radius);
    }
    Ok(())
}
