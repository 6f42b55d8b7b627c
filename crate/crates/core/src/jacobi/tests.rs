use super::*;
use crate::manifold::charts;
use crate::submanifold::ParamDomain;
use nalgebra::dvector;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn e(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// Great circle of the stereographic unit `S³` that stays on `|x| = 1`.
fn s3_point_source() -> LagrangianFamily {
    let c = charts::sphere(3, 1.0);
    let v = c.normalize(&[1.0, 0.0, 0.0], &e(3, 1)).unwrap();
    LagrangianFamily::point_source(&c, &[1.0, 0.0, 0.0], &v).unwrap()
}

fn equator_s2_in_s3() -> EmbeddedSubmanifold {
    EmbeddedSubmanifold::new("equator", charts::sphere(3, 1.0), ParamDomain::new(vec![-3.0; 2], vec![3.0; 2], vec![false; 2]), |u| {
        dvector![0.0, u[0], u[1]]
    })
    .with_derivatives(|_| DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]), |_| vec![DVector::zeros(3); 4])
}

fn geodesic_sphere(rho: f64) -> EmbeddedSubmanifold {
    let a = (rho / 2.0).tan();
    EmbeddedSubmanifold::new(
        "geodesic_sphere",
        charts::sphere(3, 1.0),
        ParamDomain::new(vec![0.1, 0.0], vec![PI - 0.1, 2.0 * PI], vec![false, true]),
        move |u| dvector![a * u[0].sin() * u[1].cos(), a * u[0].sin() * u[1].sin(), a * u[0].cos()],
    )
}

fn inward(sub: &EmbeddedSubmanifold, u: &[f64]) -> DVector<f64> {
    let p = sub.point(u).unwrap();
    sub.ambient().normalize(p.as_slice(), &(-p.clone())).unwrap()
}

#[test]
fn lambda_n_initial_blocks() {
    let line = EmbeddedSubmanifold::new("line", charts::euclidean(3), ParamDomain::new(vec![-1.0], vec![1.0], vec![false]), |u| {
        dvector![u[0], 0.0, 0.0]
    });
    let fam = lambda_n(&line, &[0.0], &e(3, 2)).unwrap();
    assert_eq!(fam.a0(), &DMatrix::from_diagonal(&dvector![1.0, 0.0]));
    assert!((fam.a0_prime() - DMatrix::from_diagonal(&dvector![0.0, 1.0])).norm() < 1e-12);

    let ps = s3_point_source();
    assert_eq!(ps.a0(), &DMatrix::zeros(2, 2));
    assert_eq!(ps.a0_prime(), &DMatrix::identity(2, 2));

    let sph = geodesic_sphere(0.7);
    let u = [1.0, 1.0];
    let fam = lambda_n(&sph, &u, &inward(&sph, &u)).unwrap();
    assert_eq!(fam.a0(), &DMatrix::identity(2, 2));
    assert!((fam.a0_prime() + DMatrix::identity(2, 2) / 0.7f64.tan()).norm() < 1e-6);
}

#[test]
fn non_lagrangian_rejected() {
    let c = charts::euclidean(3);
    let a0 = DMatrix::identity(2, 2);
    let a0p = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(LagrangianFamily::custom(&c, &[0.0; 3], &e(3, 0), a0, a0p), Err(Error::NotLagrangian { .. })));
    assert!(matches!(
        LagrangianFamily::custom(&c, &[0.0; 3], &e(3, 0), DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)),
        Err(Error::NotLagrangian { .. })
    ));
}

#[test]
fn euclidean_point_source_is_linear() {
    let c = charts::euclidean(3);
    let fam = LagrangianFamily::point_source(&c, &[0.0; 3], &e(3, 0)).unwrap();
    let ev = evolve(&fam, 3.0).unwrap();
    for t in [0.5, 1.7, 3.0] {
        assert!((ev.a(t).unwrap() - DMatrix::identity(2, 2) * t).norm() < 1e-10);
        assert!((ev.riccati(t).unwrap().s - DMatrix::identity(2, 2) / t).norm() < 1e-8);
    }
    let rep = focal_report(&ev, 3.0, DEFAULT_DET_TOL);
    assert_eq!(rep.first, FocalDistance::AtLeast(3.0));
    assert_eq!(rep.total_count, 0);
}

#[test]
fn space_form_point_sources() {
    let ev = evolve(&s3_point_source(), 3.0).unwrap();
    let h = charts::hyperbolic_ball(3);
    let v = h.normalize(&[0.0; 3], &e(3, 0)).unwrap();
    let hev = evolve(&LagrangianFamily::point_source(&h, &[0.0; 3], &v).unwrap(), 3.0).unwrap();
    for i in 1..=30 {
        let t = 0.1 * i as f64;
        assert!((ev.a(t).unwrap() - DMatrix::identity(2, 2) * t.sin()).norm() < 1e-7, "t={t}");
        assert!((hev.a(t).unwrap() - DMatrix::identity(2, 2) * t.sinh()).norm() < 1e-7 * t.cosh(), "t={t}");
    }
    assert!((ev.riccati(1.0).unwrap().s - DMatrix::identity(2, 2) / 1.0f64.tan()).norm() < 1e-6);
    assert!((ev.min_trace_k(FRAC_PI_4, 2).unwrap() - 2.0).abs() < 1e-6);
    assert!(matches!(ev.min_trace_k(1.0, 3), Err(Error::KOutOfRange { .. })));
    let rep = focal_report(&ev, 3.0, DEFAULT_DET_TOL);
    assert_eq!(rep.first, FocalDistance::AtLeast(3.0));
    let ev = evolve(&s3_point_source(), 3.3).unwrap();
    let rep = focal_report(&ev, 3.3, DEFAULT_DET_TOL);
    assert!((rep.first.value() - PI).abs() < 1e-6);
    assert_eq!(rep.focal_times[0].multiplicity, 2);
    assert!(matches!(ev.riccati(PI), Err(Error::SingularAtT { .. })));
}

#[test]
fn distance_sphere_focuses_at_center() {
    let sph = geodesic_sphere(0.7);
    let u = [1.0, 2.0];
    let ev = evolve(&lambda_n(&sph, &u, &inward(&sph, &u)).unwrap(), 1.5).unwrap();
    let rep = focal_report(&ev, 1.5, DEFAULT_DET_TOL);
    assert!((rep.first.value() - 0.7).abs() < 1e-3, "{rep:?}");
    assert_eq!(rep.focal_times[0].multiplicity, 2);
    // S(t) = −cot(ρ − t) I before the focal point
    let s = ev.riccati(0.3).unwrap().s;
    assert!((s + DMatrix::identity(2, 2) / 0.4f64.tan()).norm() < 1e-6);
}

#[test]
fn equator_focal_times_and_riccati() {
    let eq = equator_s2_in_s3();
    let v = eq.ambient().normalize(&[0.0; 3], &e(3, 0)).unwrap();
    let fam = lambda_n(&eq, &[0.0, 0.0], &v).unwrap();
    let ev = evolve(&fam, 2.0).unwrap();
    let rep = focal_report(&ev, 2.0, DEFAULT_DET_TOL);
    assert!((rep.first.value() - FRAC_PI_2).abs() < 1e-3);
    assert_eq!(rep.focal_times[0].multiplicity, 2);
    for t in [0.2, 0.9, 1.3] {
        assert!((ev.riccati(t).unwrap().s + DMatrix::identity(2, 2) * t.tan()).norm() < 1e-6);
    }
    let back = evolve(&fam.reversed(), 2.0).unwrap();
    let rep = focal_report(&back, 2.0, DEFAULT_DET_TOL);
    assert!((rep.first.value() - FRAC_PI_2).abs() < 1e-3);
}

#[test]
fn circle_focal_radius_over_both_normals() {
    let circle = EmbeddedSubmanifold::new("circle", charts::euclidean(2), ParamDomain::periodic(1, 2.0 * PI), |u| {
        dvector![u[0].cos(), u[0].sin()]
    });
    let params: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64 * 0.7]).collect();
    let samples = normal_samples(&circle, &params, 1).unwrap();
    assert_eq!(samples.len(), 8);
    let fr = focal_radius(&circle, &samples, 3.0, 2).unwrap();
    assert!((fr.radius.value() - 1.0).abs() < 1e-3);
    assert!(fr.radius.is_finite());
    let best = &fr.samples[fr.minimizer.unwrap()];
    assert!(best.v.dot(&circle.point(&best.u).unwrap()) < 0.0);
}

#[test]
fn closed_geodesic_in_flat_torus_has_no_focal_point() {
    let c = EmbeddedSubmanifold::new("loop", charts::flat_torus(2), ParamDomain::periodic(1, 1.0), |u| dvector![u[0], 0.25]);
    let samples = normal_samples(&c, &[vec![0.5]], 1).unwrap();
    let fr = focal_radius(&c, &samples, 50.0, 1).unwrap();
    assert_eq!(fr.radius, FocalDistance::AtLeast(50.0));
}

#[test]
fn wronskian_and_riccati_equation_on_bumpy_metric() {
    let c = charts::bumpy(3);
    let x0 = [0.3, -0.2, 0.5];
    let v = c.normalize(&x0, &dvector![0.4, 1.0, -0.3]).unwrap();
    let s0 = DMatrix::from_row_slice(2, 2, &[0.3, -0.2, -0.2, 0.5]);
    let fam = LagrangianFamily::custom(&c, &x0, &v, DMatrix::identity(2, 2), s0).unwrap();
    let ev = evolve(&fam, 1.0).unwrap();
    assert!(ev.max_wronskian_defect(50) < 1e-8);
    let h = 1e-4;
    for t in [0.2, 0.5, 0.8] {
        let sp = (ev.riccati(t + h).unwrap().s - ev.riccati(t - h).unwrap().s) / (2.0 * h);
        let s = ev.riccati(t).unwrap().s;
        let resid = sp + &s * &s + ev.curvature(t).unwrap();
        assert!(resid.norm() < 1e-4, "t={t}: {}", resid.norm());
    }
}

#[test]
fn determinant_keeps_sign_before_first_focal_time() {
    let sph = geodesic_sphere(0.7);
    let u = [1.4, 0.3];
    let ev = evolve(&lambda_n(&sph, &u, &inward(&sph, &u)).unwrap(), 1.0).unwrap();
    let first = focal_report(&ev, 1.0, DEFAULT_DET_TOL).first.value();
    let d0 = ev.det(0.0).unwrap();
    for i in 0..100 {
        let t = first * i as f64 / 100.0;
        assert!(ev.det(t).unwrap() * d0 > 0.0);
    }
}
