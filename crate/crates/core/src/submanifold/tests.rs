use super::*;
use crate::manifold::charts;
use crate::numerics::linalg::{asymmetry, symmetrize};
use nalgebra::dvector;
use std::f64::consts::{FRAC_PI_2, PI};

fn circle(r: f64) -> EmbeddedSubmanifold {
    EmbeddedSubmanifold::new("circle", charts::euclidean(2), ParamDomain::periodic(1, 2.0 * PI), move |u| {
        dvector![r * u[0].cos(), r * u[0].sin()]
    })
}

fn round_sphere_in_r3(rho: f64) -> EmbeddedSubmanifold {
    EmbeddedSubmanifold::new(
        "sphere",
        charts::euclidean(3),
        ParamDomain::new(vec![0.1, 0.0], vec![PI - 0.1, 2.0 * PI], vec![false, true]),
        move |u| dvector![rho * u[0].sin() * u[1].cos(), rho * u[0].sin() * u[1].sin(), rho * u[0].cos()],
    )
}

/// Distance sphere of radius `rho` about the south pole of the unit `S³`.
fn geodesic_sphere_s3(rho: f64) -> EmbeddedSubmanifold {
    let a = (rho / 2.0).tan();
    EmbeddedSubmanifold::new(
        "geodesic_sphere",
        charts::sphere(3, 1.0),
        ParamDomain::new(vec![0.1, 0.0], vec![PI - 0.1, 2.0 * PI], vec![false, true]),
        move |u| dvector![a * u[0].sin() * u[1].cos(), a * u[0].sin() * u[1].sin(), a * u[0].cos()],
    )
    .with_derivatives(
        move |u| {
            let (st, ct, sp, cp) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
            DMatrix::from_row_slice(3, 2, &[a * ct * cp, -a * st * sp, a * ct * sp, a * st * cp, -a * st, 0.0])
        },
        move |u| {
            let (st, ct, sp, cp) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
            let tt = dvector![-a * st * cp, -a * st * sp, -a * ct];
            let tp = dvector![-a * ct * sp, a * ct * cp, 0.0];
            let pp = dvector![-a * st * cp, -a * st * sp, 0.0];
            vec![tt, tp.clone(), tp, pp]
        },
    )
}

fn inward(sub: &EmbeddedSubmanifold, u: &[f64]) -> DVector<f64> {
    let p = sub.point(u).unwrap();
    sub.ambient().normalize(p.as_slice(), &(-p.clone())).unwrap()
}

#[test]
fn line_in_plane_split() {
    let line = EmbeddedSubmanifold::new("line", charts::euclidean(2), ParamDomain::new(vec![-5.0], vec![5.0], vec![false]), |u| {
        dvector![u[0], 0.0]
    });
    let f = line.tangent_normal_split(&[0.3]).unwrap();
    assert!((&f.tangent[0] - dvector![1.0, 0.0]).norm() < 1e-12);
    assert!((&f.normal[0] - dvector![0.0, 1.0]).norm() < 1e-12);
}

#[test]
fn circle_split_at_angle_zero() {
    let f = circle(2.0).tangent_normal_split(&[0.0]).unwrap();
    assert!((&f.tangent[0] - dvector![0.0, 1.0]).norm() < 1e-9);
    assert!((&f.normal[0] - dvector![1.0, 0.0]).norm() < 1e-9);
}

#[test]
fn equator_of_polar_sphere_split() {
    let eq = EmbeddedSubmanifold::new("equator", charts::sphere_polar(), ParamDomain::periodic(1, 2.0 * PI), |u| {
        dvector![FRAC_PI_2, u[0]]
    });
    let f = eq.tangent_normal_split(&[1.0]).unwrap();
    assert!((&f.tangent[0] - dvector![0.0, 1.0]).norm() < 1e-10);
    assert!((f.normal[0][0].abs() - 1.0).abs() < 1e-10 && f.normal[0][1].abs() < 1e-10);
    assert!(f.inner(&f.tangent[0], &f.normal[0]).abs() < 1e-10);
}

#[test]
fn rank_deficiency_detected() {
    let bad = EmbeddedSubmanifold::new("pinched", charts::euclidean(2), ParamDomain::new(vec![-1.0], vec![1.0], vec![false]), |u| {
        dvector![u[0].powi(5), 0.0]
    });
    assert!(matches!(bad.tangent_normal_split(&[0.0]), Err(Error::RankDeficientEmbedding { .. })));
}

#[test]
fn hyperplane_is_totally_geodesic() {
    let plane = EmbeddedSubmanifold::new("plane", charts::euclidean(3), ParamDomain::new(vec![-1.0; 2], vec![1.0; 2], vec![false; 2]), |u| {
        dvector![u[0], u[1], 0.5]
    });
    let s = shape_operator(&plane, &[0.2, -0.3], &dvector![0.0, 0.0, 1.0]).unwrap();
    assert!(s.norm() < 1e-8);
    let geo = normal_exp(&plane, &[0.2, -0.3], &dvector![0.0, 0.0, 1.0], 1.0).unwrap();
    assert!((geo.end().x - dvector![0.2, -0.3, 1.5]).norm() < 1e-12);
}

#[test]
fn tangential_vector_rejected() {
    let c = circle(1.0);
    assert!(matches!(shape_operator(&c, &[0.0], &dvector![0.0, 1.0]), Err(Error::NotNormal { .. })));
}

#[test]
fn round_sphere_inward_principal_curvatures() {
    let s = round_sphere_in_r3(0.5);
    let u = [0.9, 2.0];
    let (_, raw) = shape_operator_raw(&s, &u, &inward(&s, &u)).unwrap();
    assert!(asymmetry(&raw) < 1e-7);
    assert!((symmetrize(&raw) - DMatrix::identity(2, 2) * 2.0).norm() < 1e-6);
}

#[test]
fn distance_sphere_in_s3() {
    let rho = 0.7;
    let s = geodesic_sphere_s3(rho);
    let u = [1.2, 0.4];
    let op = shape_operator(&s, &u, &inward(&s, &u)).unwrap();
    let cot = 1.0 / rho.tan();
    assert!((op - DMatrix::identity(2, 2) * cot).norm() < 1e-6);
    assert!((second_fundamental_form_norm(&s, &u).unwrap() - cot).abs() < 1e-6);
    let v = inward(&s, &u);
    assert!((partial_trace(&s, &u, &v, 2, TraceMode::Min).unwrap() - 2.0 * cot).abs() < 1e-6);
}

#[test]
fn gauss_equation_on_distance_sphere() {
    let rho = 0.7;
    let s = geodesic_sphere_s3(rho);
    let u = [1.1, 0.5];
    let frame = s.tangent_normal_split(&u).unwrap();
    let ambient = crate::manifold::sectional_curvature(s.ambient(), frame.point.as_slice(), &frame.tangent[0], &frame.tangent[1]).unwrap();
    let op = shape_operator(&s, &u, &frame.normal[0]).unwrap();
    let via_gauss = ambient + op.determinant();
    let induced = s.induced_chart();
    let intrinsic = crate::manifold::sectional_curvature(&induced, &u, &dvector![1.0, 0.0], &dvector![0.0, 1.0]).unwrap();
    assert!((via_gauss - 1.0 / rho.sin().powi(2)).abs() < 1e-6);
    assert!((via_gauss - intrinsic).abs() < 1e-5, "{via_gauss} vs {intrinsic}");
}

#[test]
fn planar_circle_norm() {
    for r in [0.5, 1.0, 3.0] {
        assert!((second_fundamental_form_norm(&circle(r), &[0.7]).unwrap() - 1.0 / r).abs() < 1e-6);
    }
}

#[test]
fn equator_in_s3_has_zero_norm() {
    let eq = EmbeddedSubmanifold::new("equator", charts::sphere(3, 1.0), ParamDomain::new(vec![-2.0; 2], vec![2.0; 2], vec![false; 2]), |u| {
        dvector![0.0, u[0], u[1]]
    })
    .with_derivatives(
        |_| DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]),
        |_| vec![DVector::zeros(3); 4],
    );
    for u in [[0.0, 0.0], [0.5, -0.3], [1.5, 1.0]] {
        assert!(second_fundamental_form_norm(&eq, &u).unwrap() < 1e-8);
    }
}

fn space_circle(r: f64) -> EmbeddedSubmanifold {
    EmbeddedSubmanifold::new("space_circle", charts::euclidean(3), ParamDomain::periodic(1, 2.0 * PI), move |u| {
        dvector![r * u[0].cos(), r * u[0].sin(), 0.0]
    })
}

#[test]
fn codimension_two_norm_and_linearity() {
    let c = space_circle(2.0);
    let norm = second_fundamental_form_norm_with(&c, &[0.4], SffNormKind::Spectral).unwrap();
    assert!((norm.value - 0.5).abs() < 1e-6);
    let frob = second_fundamental_form_norm_with(&c, &[0.4], SffNormKind::Frobenius).unwrap();
    assert!((frob.value - 0.5).abs() < 1e-6);

    let helix = EmbeddedSubmanifold::new("helix", charts::bumpy(3), ParamDomain::new(vec![-3.0], vec![3.0], vec![false]), |u| {
        dvector![u[0].cos(), u[0].sin(), 0.3 * u[0]]
    });
    let f = helix.tangent_normal_split(&[0.5]).unwrap();
    let (v1, v2) = (&f.normal[0], &f.normal[1]);
    let (a, b) = (0.6, -0.8);
    let combo = v1 * a + v2 * b;
    let s1 = shape_operator(&helix, &[0.5], v1).unwrap();
    let s2 = shape_operator(&helix, &[0.5], v2).unwrap();
    let s12 = shape_operator(&helix, &[0.5], &combo).unwrap();
    assert!((s12 - (s1 * a + s2 * b)).norm() < 1e-7);
}

#[test]
fn partial_trace_modes() {
    let s = DMatrix::from_diagonal(&dvector![1.0, -1.0]);
    assert_eq!(min_partial_trace(&s, 1).unwrap(), -1.0);
    assert_eq!(max_partial_trace(&s, 1).unwrap(), 1.0);
    assert!(min_partial_trace(&DMatrix::zeros(3, 3), 2).unwrap().abs() < 1e-15);
    assert!(matches!(min_partial_trace(&s, 3), Err(Error::KOutOfRange { .. })));
    let sph = round_sphere_in_r3(0.5);
    let u = [1.0, 1.0];
    let v = inward(&sph, &u);
    let f = sph.tangent_normal_split(&u).unwrap();
    let given = partial_trace(&sph, &u, &v, 1, TraceMode::Frame(&f.tangent[..1])).unwrap();
    assert!((given - 2.0).abs() < 1e-6);
}

#[test]
fn normal_exponential_examples() {
    let st = charts::sphere(2, 1.0);
    let eq = EmbeddedSubmanifold::new("equator", st, ParamDomain::periodic(1, 2.0 * PI), |u| dvector![u[0].cos(), u[0].sin()]);
    let geo = normal_exp(&eq, &[0.0], &dvector![-1.0, 0.0], FRAC_PI_2).unwrap();
    assert!(geo.end().x.norm() < 1e-7);
    let geo = normal_exp(&circle(1.0), &[0.0], &dvector![-1.0, 0.0], 1.0).unwrap();
    assert!(geo.end().x.norm() < 1e-9);
}

#[test]
fn adapted_frame_is_orthonormal_complement() {
    let c = space_circle(1.0);
    let f = c.tangent_normal_split(&[0.3]).unwrap();
    let v = f.normal_from(&[0.6, 0.8]);
    let frame = f.adapted_frame(&v);
    assert_eq!(frame.len(), 2);
    assert!(f.inner(&frame[1], &v).abs() < 1e-12);
    assert!((f.inner(&frame[1], &frame[1]) - 1.0).abs() < 1e-12);
    assert!(f.inner(&frame[0], &frame[1]).abs() < 1e-12);
}

#[test]
fn midpoint_grid_weights_sum_to_area() {
    let d = ParamDomain::new(vec![0.0, -1.0], vec![2.0, 1.0], vec![true, false]);
    let g = d.midpoint_grid(&[4, 5]);
    assert_eq!(g.len(), 20);
    assert!((g.iter().map(|p| p.1).sum::<f64>() - 4.0).abs() < 1e-12);
}
