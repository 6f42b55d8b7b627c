use nalgebra::{DMatrix, DVector};

use super::{require_hypothesis, uniform_times};
use crate::error::{Error, Result};
use crate::jacobi::{evolve, focal_report, lambda_n, normal_samples, FamilyKind, LagrangianFamily, DEFAULT_DET_TOL};
use crate::manifold::curvature::sectional_from;
use crate::manifold::{geodesic, parallel_transport, riemann, CurvatureHypothesis, Kappa};
use crate::numerics::linalg::{complete_basis, ip};
use crate::numerics::quadrature::gauss_legendre;
use crate::numerics::sym_eigen;
use crate::report::VerifierReport;
use crate::submanifold::{second_fundamental_form_norm, EmbeddedSubmanifold};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoulOptions {
    pub tolerance: f64,
    /// Normal directions per base point in codimension above one.
    pub normals_per_point: usize,
    /// Points along the base geodesic of the strip.
    pub strip_s: usize,
    /// Points along each normal geodesic of the strip.
    pub strip_t: usize,
    /// Upper bound on the normal extent of the strip.
    pub strip_len: f64,
    /// Times per normal geodesic for the radial curvature check.
    pub radial_points: usize,
}

impl Default for SoulOptions {
    fn default() -> Self {
        SoulOptions { tolerance: 1e-7, normals_per_point: 8, strip_s: 8, strip_t: 20, strip_len: 10.0, radial_points: 50 }
    }
}

/// Length of a closed curve over one period of its parameter.
fn curve_length(sub: &EmbeddedSubmanifold) -> Result<f64> {
    let d = sub.domain();
    let mut len = 0.0;
    for (s, w) in gauss_legendre(64, d.lower[0], d.upper[0]) {
        let p = sub.point(&[s])?;
        let g = sub.ambient().metric_at(p.as_slice())?;
        let j = sub.jacobian(&[s])?;
        let t = j.column(0).into_owned();
        len += w * ip(&g, &t, &t).sqrt();
    }
    Ok(len)
}

/// Checks for a submanifold with infinite focal radius in nonnegative curvature:
/// (a) it is totally geodesic, (b) the strip swept by normal geodesics along a
/// geodesic `c` of `N` in a parallel normal direction is flat, and (c) the
/// radial curvatures along normal geodesics are nonnegative.
pub fn soul_checks(
    sub: &EmbeddedSubmanifold,
    hyp: CurvatureHypothesis,
    params: &[Vec<f64>],
    t_max: f64,
    scenario: &str,
    opts: SoulOptions,
    jobs: usize,
) -> Result<VerifierReport> {
    if hyp.kappa == Kappa::MinusOne {
        return Err(Error::InvalidInput("soul checks need kappa >= 0".into()));
    }
    hyp.validate(sub.ambient().dim())?;
    if params.is_empty() {
        return Err(Error::InvalidInput("soul checks need at least one base point".into()));
    }
    let samples = normal_samples(sub, params, opts.normals_per_point)?;
    let radial = crate::par_map(jobs, &samples, |_, s| -> Result<_> {
        let ev = evolve(&lambda_n(sub, &s.u, &s.v)?, t_max)?;
        let rep = focal_report(&ev, t_max, DEFAULT_DET_TOL);
        if let Some(t) = rep.focal_times.first() {
            return Err(Error::NotInfiniteFocal { t: t.t });
        }
        let times = uniform_times(t_max, opts.radial_points);
        require_hypothesis(&ev, hyp, &times)?;
        let mut min = f64::INFINITY;
        for &t in &times {
            min = min.min(sym_eigen(&ev.curvature(t)?)?.min());
        }
        Ok(min)
    });
    let mut report = VerifierReport::new("soul", scenario, opts.tolerance);
    let mut min_radial = f64::INFINITY;
    let mut radial_rows = Vec::with_capacity(samples.len());
    for r in radial {
        radial_rows.push(r?);
    }

    let mut max_ii: f64 = 0.0;
    for u in params {
        let ii = second_fundamental_form_norm(sub, u)?;
        let mut p: Vec<(&str, f64)> = vec![("u0", u[0])];
        if u.len() > 1 {
            p.push(("u1", u[1]));
        }
        report.record("second_fundamental_form", &p, ii, 0.0);
        max_ii = max_ii.max(ii);
    }

    let strip = strip_curvatures(sub, &params[0], &samples[0].v, opts)?;
    let mut max_strip: f64 = 0.0;
    for (s, t, sec) in strip {
        report.record("strip", &[("s", s), ("t", t)], sec.abs(), 0.0);
        max_strip = max_strip.max(sec.abs());
    }

    for (s, min) in samples.iter().zip(radial_rows) {
        let mut p: Vec<(&str, f64)> = vec![("u0", s.u[0])];
        if s.u.len() > 1 {
            p.push(("u1", s.u[1]));
        }
        report.record("radial_curvature", &p, -min, 0.0);
        min_radial = min_radial.min(min);
    }
    report.quantity("t_max", t_max);
    report.quantity("max_second_fundamental_form", max_ii);
    report.quantity("max_abs_strip_curvature", max_strip);
    report.quantity("min_radial_curvature", min_radial);
    report.note(format!("no focal point up to T_max = {t_max} on {} normal geodesics", samples.len()));
    Ok(report)
}

/// `sec(∂_s Φ, ∂_t Φ)` on `Φ(s, t) = exp(t V(s))`, with `c` the geodesic of `N`
/// leaving `F(u0)` along its first tangent vector and `V` parallel along `c`.
fn strip_curvatures(sub: &EmbeddedSubmanifold, u0: &[f64], v0: &DVector<f64>, opts: SoulOptions) -> Result<Vec<(f64, f64, f64)>> {
    let chart = sub.ambient();
    let split = sub.tangent_normal_split(u0)?;
    let c_len = if sub.param_dim() == 1 && sub.domain().is_closed() { curve_length(sub)? } else { opts.strip_len };
    let c = geodesic(chart, split.point.as_slice(), &split.tangent[0], (0.0, c_len))?;
    let len = opts.strip_len;
    let mut out = Vec::new();
    for i in 0..opts.strip_s {
        let s = c_len * i as f64 / opts.strip_s as f64;
        let base = c.at(s)?;
        let v = parallel_transport(&c, v0, s)?;
        let g = chart.metric_at(base.x.as_slice())?;
        let mut first = vec![v.clone(), base.v.clone()];
        first = complete_basis(&first, &g);
        let frame: Vec<DVector<f64>> = first.into_iter().skip(1).collect();
        let d = frame.len();
        let mut a0 = DMatrix::zeros(d, d);
        let mut a0p = DMatrix::identity(d, d);
        a0[(0, 0)] = 1.0;
        a0p[(0, 0)] = 0.0;
        let family = LagrangianFamily::new(chart, base.x.as_slice(), &v, frame, a0, a0p, FamilyKind::Custom)?;
        let ev = evolve(&family, len)?;
        for j in 1..=opts.strip_t {
            let t = len * j as f64 / opts.strip_t as f64;
            let p = ev.at(t)?;
            let mut field = DVector::zeros(chart.dim());
            for (row, e) in p.geodesic.frame.iter().enumerate() {
                field.axpy(p.a[(row, 0)], e, 1.0);
            }
            let r = riemann(chart, p.geodesic.x.as_slice())?;
            out.push((s, t, sectional_from(&r, &field, &p.geodesic.v)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(super) fn strip_curvatures_for_test(sub: &EmbeddedSubmanifold, u0: &[f64], v0: &DVector<f64>, opts: SoulOptions) -> Vec<(f64, f64, f64)> {
    strip_curvatures(sub, u0, v0, opts).expect("strip evaluation")
}
