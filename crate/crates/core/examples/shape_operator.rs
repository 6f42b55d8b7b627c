//! Shape operators and second fundamental form norms of catalog submanifolds.

use std::f64::consts::FRAC_PI_4;

use focallab::manifold::charts;
use focallab::scenarios::embeddings;
use focallab::submanifold::{second_fundamental_form_norm, shape_operator};

fn main() -> focallab::Result<()> {
    let rho: f64 = 0.7;
    let sphere = embeddings::coordinate_sphere("geodesic_sphere", charts::sphere(3, 1.0), (rho / 2.0).tan());
    let clifford = embeddings::clifford_torus("clifford_torus", charts::sphere(3, 1.0));
    let circle = embeddings::planar_circle("circle", charts::euclidean(3), 2.0);
    for (sub, u) in [(&sphere, vec![1.0, 0.4]), (&clifford, vec![FRAC_PI_4, 0.3]), (&circle, vec![0.5])] {
        let split = sub.tangent_normal_split(&u)?;
        println!("{} at {u:?}", sub.name());
        for (i, nu) in split.normal.iter().enumerate() {
            let s = shape_operator(sub, &u, nu)?;
            println!("  S_nu{i} = {}", s.iter().map(|x| format!("{x:+.8}")).collect::<Vec<_>>().join(" "));
        }
        println!("  |II| = {:.12}", second_fundamental_form_norm(sub, &u)?);
    }
    println!("expected |II|: cot(0.7) = {:.12}, clifford 1, circle 1/2", 1.0 / rho.tan());
    Ok(())
}
