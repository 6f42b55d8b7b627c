//! Riccati trace comparison along normal geodesics and point sources.

use focallab::comparison::{verify_comparison_lemma, LemmaOptions};
use focallab::jacobi::{evolve, lambda_n, LagrangianFamily};
use focallab::manifold::{charts, CurvatureHypothesis, Kappa};
use focallab::scenarios::embeddings;
use nalgebra::dvector;

fn main() -> focallab::Result<()> {
    let grid: Vec<f64> = (0..=40).map(|i| 0.1 + 0.05 * i as f64).collect();
    let opts = LemmaOptions::default();

    let s3 = charts::sphere(3, 1.0);
    let fam = LagrangianFamily::point_source(&s3, &[0.0; 3], &dvector![0.5, 0.0, 0.0])?;
    let rep = verify_comparison_lemma(&evolve(&fam, 3.0)?, CurvatureHypothesis::new(Kappa::One, 2), &grid, "sphere3", opts)?;
    println!("point source in S^3, k = 2: pass {} with {} rows, max |margin| {:.3e}", rep.pass, rep.samples.len(), rep.max_abs_margin());

    let sphere = embeddings::coordinate_sphere("geodesic_sphere", s3.clone(), 0.35f64.tan());
    let u = [1.0, 0.5];
    let p = sphere.point(&u)?;
    let inward = s3.normalize(p.as_slice(), &(-p.clone()))?;
    let ev = evolve(&lambda_n(&sphere, &u, &inward)?, 1.0)?;
    let rep = verify_comparison_lemma(&ev, CurvatureHypothesis::new(Kappa::One, 2), &grid, "geodesic_sphere", opts)?;
    println!("inside a geodesic sphere: pass {}, first focal time {:.10}", rep.pass, rep.quantities["first_focal_time"]);
    for r in rep.samples.iter().step_by(3) {
        println!("  t = {:.2}  min tr_k(S) = {:+.10}  k ct(...) = {:+.10}", r.params["t"], r.lhs, r.rhs);
    }

    let h3 = charts::hyperbolic_ball(3);
    let fam = LagrangianFamily::point_source(&h3, &[0.0; 3], &dvector![0.5, 0.0, 0.0])?;
    match verify_comparison_lemma(&evolve(&fam, 1.0)?, CurvatureHypothesis::new(Kappa::Zero, 1), &grid, "hyperbolic3", opts) {
        Err(e) => println!("hyperbolic space under Ric_1 >= 0: refused ({e})"),
        Ok(_) => println!("hyperbolic space under Ric_1 >= 0: unexpectedly accepted"),
    }
    Ok(())
}
