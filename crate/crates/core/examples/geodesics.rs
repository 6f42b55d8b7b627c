//! Framed geodesics and parallel transport on the round 2-sphere.

use std::f64::consts::PI;

use focallab::manifold::{charts, geodesic, parallel_transport};
use nalgebra::dvector;

fn main() -> focallab::Result<()> {
    let s2 = charts::sphere(2, 1.0);
    // equator point heading through the chart centre
    let x0 = [1.0, 0.0];
    let v0 = dvector![-1.0, 0.0];
    let g = geodesic(&s2, &x0, &v0, (0.0, PI))?;
    for k in 0..=4 {
        let t = PI * k as f64 / 4.0;
        let p = g.at(t)?;
        println!("t = {t:.4}  x = ({:+.10}, {:+.10})", p.x[0], p.x[1]);
    }
    let w = parallel_transport(&g, &dvector![0.0, 1.0], PI)?;
    println!("transported (0, 1) at t = pi: ({:+.10}, {:+.10})", w[0], w[1]);
    println!("frame defect: {:.3e}", g.frame_defect(50)?);
    Ok(())
}
