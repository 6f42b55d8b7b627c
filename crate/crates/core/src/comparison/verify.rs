use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use super::model::{ct_kappa, RiccatiModel};
use super::{require_hypothesis, uniform_times};
use crate::error::{Error, Result};
use crate::jacobi::{evolve, focal_report, lambda_n, FocalDistance, JacobiEvolution, DEFAULT_DET_TOL};
use crate::manifold::{CurvatureHypothesis, Kappa};
use crate::report::VerifierReport;
use crate::submanifold::{max_partial_trace, min_partial_trace, shape_operator, EmbeddedSubmanifold};
use crate::jacobi::NormalSample;

/// Focal times up to `π/2 + FOCAL_PI2_WINDOW` count as lying in `[−π/2, π/2]`.
pub const FOCAL_PI2_WINDOW: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaOptions {
    pub tolerance: f64,
    /// Grid points closer than this to the first focal time or the model
    /// blow-up are skipped.
    pub guard: f64,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { tolerance: 1e-6, guard: 0.05 }
    }
}

fn singular_grid(e: Error, t: f64) -> Error {
    match e {
        Error::SingularAtT { .. } => Error::SingularGrid { t },
        other => other,
    }
}

/// Riccati trace comparison: with `λ̃` matched to `min_trace_k/k` at the first
/// grid point, checks `min_trace_k(t) ≤ k·λ̃(t)` on the rest of the grid up to
/// the first focal time or blow-up.
pub fn verify_comparison_lemma(
    ev: &JacobiEvolution,
    hyp: CurvatureHypothesis,
    grid: &[f64],
    scenario: &str,
    opts: LemmaOptions,
) -> Result<VerifierReport> {
    let n = ev.family().chart().dim();
    hyp.validate(n)?;
    let mut grid: Vec<f64> = grid.iter().copied().filter(|t| *t >= 0.0 && *t <= ev.t_max()).collect();
    grid.sort_by(f64::total_cmp);
    let Some(&t0) = grid.first() else {
        return Err(Error::InvalidInput("comparison grid has no points inside the evolution span".into()));
    };
    let min_ric = require_hypothesis(ev, hyp, &grid)?;
    let k = hyp.k;
    let kf = k as f64;
    let first = focal_report(ev, ev.t_max(), DEFAULT_DET_TOL).first;
    let lambda0 = ev.min_trace_k(t0, k).map_err(|e| singular_grid(e, t0))? / kf;
    let model = RiccatiModel::new(hyp.kappa, lambda0, t0);
    let mut cutoff = ev.t_max() + 1.0;
    if let FocalDistance::Finite(t) = first {
        cutoff = cutoff.min(t - opts.guard);
    }
    if let Some(b) = model.blowup() {
        cutoff = cutoff.min(b - opts.guard);
    }
    let mut report = VerifierReport::new("comparison-lemma", scenario, opts.tolerance);
    for &t in grid.iter().filter(|t| **t < cutoff || **t == t0) {
        let lhs = ev.min_trace_k(t, k).map_err(|e| singular_grid(e, t))?;
        let rhs = kf * model.eval(t)?;
        report.record("t", &[("t", t)], lhs, rhs);
    }
    report.quantity("t0", t0);
    report.quantity("lambda0", lambda0);
    report.quantity("first_focal_time", if first.is_finite() { first.value() } else { f64::NAN });
    report.quantity("model_blowup", model.blowup().unwrap_or(f64::NAN));
    report.quantity("min_sampled_ric_k", min_ric);
    report.quantity("max_abs_margin", report.max_abs_margin());
    Ok(report)
}

fn param_pairs(u: &[f64]) -> Vec<(&'static str, f64)> {
    const NAMES: [&str; 4] = ["u0", "u1", "u2", "u3"];
    u.iter().enumerate().take(4).map(|(i, x)| (NAMES[i], *x)).collect()
}

struct TwoSided {
    forward: crate::jacobi::FocalReport,
    backward: crate::jacobi::FocalReport,
    min_ric: f64,
}

fn two_sided(sub: &EmbeddedSubmanifold, s: &NormalSample, hyp: CurvatureHypothesis, t_max: f64) -> Result<TwoSided> {
    let mut min_ric = f64::INFINITY;
    let mut reports = Vec::with_capacity(2);
    for v in [s.v.clone(), -&s.v] {
        let ev = evolve(&lambda_n(sub, &s.u, &v)?, t_max)?;
        let rep = focal_report(&ev, t_max, DEFAULT_DET_TOL);
        let upto = if rep.first.is_finite() { rep.first.value() } else { t_max };
        min_ric = min_ric.min(require_hypothesis(&ev, hyp, &uniform_times(upto, 20))?);
        reports.push(rep);
    }
    let backward = reports.pop().expect("two reports");
    let forward = reports.pop().expect("two reports");
    Ok(TwoSided { forward, backward, min_ric })
}

fn check_dims(sub: &EmbeddedSubmanifold, hyp: CurvatureHypothesis) -> Result<()> {
    hyp.validate(sub.ambient().dim())?;
    if hyp.k > sub.param_dim() {
        return Err(Error::KOutOfRange { k: hyp.k, max: sub.param_dim() });
    }
    Ok(())
}

/// `|Σ_{i≤k} ⟨S_v e_i, e_i⟩| ≤ k·ct_κ(r_v)` where `r_v` is the focal radius
/// along the whole normal geodesic (both `±v`). The left side is maximized
/// over orthonormal `k`-sets via the extreme eigenvalue sums.
pub fn verify_shape_bound(
    sub: &EmbeddedSubmanifold,
    hyp: CurvatureHypothesis,
    samples: &[NormalSample],
    t_max: f64,
    scenario: &str,
    tolerance: f64,
    jobs: usize,
) -> Result<VerifierReport> {
    check_dims(sub, hyp)?;
    let rows = crate::par_map(jobs, samples, |_, s| -> Result<_> {
        let op = shape_operator(sub, &s.u, &s.v)?;
        let lo = min_partial_trace(&op, hyp.k)?;
        let hi = max_partial_trace(&op, hyp.k)?;
        let two = two_sided(sub, s, hyp, t_max)?;
        let r = two.forward.first.min(two.backward.first);
        Ok((lo, hi, r, two.min_ric))
    });
    let mut report = VerifierReport::new("shape-bound", scenario, tolerance);
    let kf = hyp.k as f64;
    let mut min_r = f64::INFINITY;
    let mut max_trace: f64 = 0.0;
    let mut min_ric = f64::INFINITY;
    let mut lower_bound_only = false;
    for (s, row) in samples.iter().zip(rows) {
        let (lo, hi, r, ric) = row?;
        let lhs = lo.abs().max(hi.abs());
        let rhs = kf * ct_kappa(hyp.kappa, r.value())?;
        let mut params = param_pairs(&s.u);
        params.extend([("focal_radius", r.value()), ("trace_min", lo), ("trace_max", hi)]);
        report.record("normal", &params, lhs, rhs);
        min_r = min_r.min(r.value());
        max_trace = max_trace.max(lhs);
        min_ric = min_ric.min(ric);
        lower_bound_only |= !r.is_finite();
    }
    report.quantity("focal_radius", min_r);
    report.quantity("max_abs_partial_trace", max_trace);
    report.quantity("min_sampled_ric_k", min_ric);
    if lower_bound_only {
        report.note(format!("no focal point before T_max = {t_max} on some geodesics; bound uses ct(T_max)"));
    }
    Ok(report)
}

/// For `Ric_k ≥ k`: every normal geodesic has at least `dim N − k + 1` focal
/// points in `[−π/2, π/2]`, so the focal radius is at most `π/2`.
pub fn verify_focal_pi_over_2(
    sub: &EmbeddedSubmanifold,
    hyp: CurvatureHypothesis,
    samples: &[NormalSample],
    scenario: &str,
    tolerance: f64,
    jobs: usize,
) -> Result<VerifierReport> {
    if hyp.kappa != Kappa::One {
        return Err(Error::InvalidInput("the focal-radius bound pi/2 needs kappa = 1".into()));
    }
    check_dims(sub, hyp)?;
    let window = FRAC_PI_2 + FOCAL_PI2_WINDOW;
    let t_scan = FRAC_PI_2 + 0.05;
    let needed = (sub.param_dim() - hyp.k + 1) as f64;
    let rows = crate::par_map(jobs, samples, |_, s| two_sided(sub, s, hyp, t_scan));
    let mut report = VerifierReport::new("focal-pi2", scenario, tolerance);
    let mut min_count = f64::INFINITY;
    let mut radius = f64::INFINITY;
    for (s, row) in samples.iter().zip(rows) {
        let two = row?;
        let count = (two.forward.count_within(window) + two.backward.count_within(window)) as f64;
        let r = two.forward.first.min(two.backward.first).value();
        let mut params = param_pairs(&s.u);
        params.push(("count", count));
        report.record("focal_count", &params, needed, count);
        let mut params = param_pairs(&s.u);
        params.push(("focal_radius", r));
        report.record("focal_radius", &params, r, FRAC_PI_2);
        min_count = min_count.min(count);
        radius = radius.min(r);
    }
    report.quantity("required_count", needed);
    report.quantity("min_focal_count", min_count);
    report.quantity("focal_radius", radius);
    Ok(report)
}

/// Compares `A(t)` with `A0·cs_K(t) + A0'·sn_K(t)` for constant curvature `K`.
pub fn verify_jacobi_model(ev: &JacobiEvolution, curvature: f64, times: &[f64], scenario: &str, tolerance: f64) -> Result<VerifierReport> {
    let fam = ev.family();
    let (sn, cs): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>) = if curvature > 0.0 {
        let w = curvature.sqrt();
        (Box::new(move |t: f64| (w * t).sin() / w), Box::new(move |t: f64| (w * t).cos()))
    } else if curvature < 0.0 {
        let w = (-curvature).sqrt();
        (Box::new(move |t: f64| (w * t).sinh() / w), Box::new(move |t: f64| (w * t).cosh()))
    } else {
        (Box::new(|t| t), Box::new(|_| 1.0))
    };
    let mut report = VerifierReport::new("jacobi-model", scenario, 0.0);
    for &t in times {
        let model: DMatrix<f64> = fam.a0() * cs(t) + fam.a0_prime() * sn(t);
        let err = (ev.a(t)? - model).norm();
        report.record("t", &[("t", t)], err, tolerance);
    }
    Ok(report)
}

/// Scaled Wronskian defect of each evolution, against `tolerance`.
pub fn verify_wronskian(evs: &[(String, JacobiEvolution)], scenario: &str, tolerance: f64) -> VerifierReport {
    let mut report = VerifierReport::new("wronskian", scenario, 0.0);
    for (label, ev) in evs {
        report.record(label.clone(), &[("t_max", ev.t_max())], ev.max_wronskian_defect(100), tolerance);
    }
    report
}
