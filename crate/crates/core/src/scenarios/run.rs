use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build, CheckKind, ExpectedValue, Overrides, Scenario, Subject};
use crate::comparison::{
    base_conjugate_radius, soul_checks, tube_volume, unit_directions, verify_comparison_lemma, verify_focal_pi_over_2,
    verify_jacobi_model, verify_shape_bound, LemmaOptions, SoulOptions, HYPOTHESIS_TOL,
};
use crate::error::{Error, Result};
use crate::jacobi::{evolve, focal_radius, lambda_n, normal_samples, FocalDistance, LagrangianFamily, NormalSample};
use crate::manifold::{directional_curvature_operator, ric_k, riemann, sectional_curvature, Chart};
use crate::numerics::linalg::{complete_basis, ip};
use crate::numerics::{orthonormalize, sym_eigen};
use crate::report::{HypothesisRecord, RunReport, VerifierReport};
use crate::submanifold::{second_fundamental_form_norm, shape_operator, EmbeddedSubmanifold};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub jobs: usize,
    /// Include wall-clock timings (which makes reports non-reproducible).
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { jobs: 1, timings: false }
    }
}

/// Run every check of a catalog scenario.
pub fn run_scenario(id: &str, overrides: &Overrides, opts: RunOptions) -> Result<RunReport> {
    let s = build(id, overrides)?;
    run_checks(&s, &s.checks, opts)
}

/// Run selected checks after confirming the curvature hypothesis, then compare
/// the computed quantities with the scenario's expected values.
pub fn run_checks(s: &Scenario, checks: &[CheckKind], opts: RunOptions) -> Result<RunReport> {
    let mut quantities = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let mut reports = vec![hypothesis_report(s)?];
    for &c in checks {
        let start = Instant::now();
        let mut extra = Vec::new();
        let rep = run_check(s, c, opts, &mut quantities, &mut extra)?;
        timings.insert(c.name().to_string(), start.elapsed().as_secs_f64());
        reports.push(rep);
        reports.extend(extra);
    }
    if let Some(exp) = expected_report(s, &quantities) {
        reports.push(exp);
    }
    Ok(RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: s.id.to_string(),
        hypothesis: HypothesisRecord { kappa: s.hypothesis.kappa.as_i32(), k: s.hypothesis.k },
        checks: reports,
        quantities,
        timings: opts.timings.then_some(timings),
    })
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_unit(chart: &Chart, x: &[f64], rng: &mut ChaCha8Rng) -> Result<DVector<f64>> {
    let g = chart.metric_at(x)?;
    loop {
        let v = DVector::from_fn(chart.dim(), |_, _| rng.gen_range(-1.0..1.0));
        let len = ip(&g, &v, &v).sqrt();
        if len > 0.1 {
            return Ok(v / len);
        }
    }
}

/// Points at which curvature is sampled.
fn sample_points(s: &Scenario) -> Result<Vec<Vec<f64>>> {
    match &s.subject {
        Subject::Submanifold(sub) => s.sampling.params.iter().map(|u| Ok(sub.point(u)?.as_slice().to_vec())).collect(),
        _ => Ok(s.sampling.points.clone()),
    }
}

fn hypothesis_report(s: &Scenario) -> Result<VerifierReport> {
    let hyp = s.hypothesis;
    hyp.validate(s.chart.dim())?;
    let mut r = rng(s.sampling.seed, 1);
    let mut report = VerifierReport::new("hypothesis", s.id, HYPOTHESIS_TOL);
    let mut min = f64::INFINITY;
    for (i, x) in sample_points(s)?.iter().enumerate() {
        for j in 0..8 {
            let v = random_unit(&s.chart, x, &mut r)?;
            let ric = ric_k(&s.chart, x, &v, hyp.k)?;
            report.record("ric_k", &[("point", i as f64), ("direction", j as f64)], hyp.bound(), ric);
            min = min.min(ric);
        }
    }
    report.quantity("min_sampled_ric_k", min);
    report.quantity("bound", hyp.bound());
    if !report.pass {
        return Err(Error::HypothesisViolated { k: hyp.k, sampled: min, bound: hyp.bound() });
    }
    Ok(report)
}

fn need_sub(s: &Scenario, check: CheckKind) -> Result<&EmbeddedSubmanifold> {
    s.submanifold()
        .ok_or_else(|| Error::InvalidInput(format!("check {} needs a submanifold; scenario {} has none", check.name(), s.id)))
}

fn samples(s: &Scenario, sub: &EmbeddedSubmanifold) -> Result<Vec<NormalSample>> {
    normal_samples(sub, &s.sampling.params, s.sampling.normals_per_point)
}

fn u_params(u: &[f64]) -> Vec<(&'static str, f64)> {
    const NAMES: [&str; 3] = ["u0", "u1", "u2"];
    u.iter().take(3).enumerate().map(|(i, x)| (NAMES[i], *x)).collect()
}

fn record_distance(q: &mut BTreeMap<String, f64>, name: &str, d: FocalDistance) {
    q.insert(name.to_string(), d.value());
    q.insert(format!("{name}_unbounded"), if d.is_finite() { 0.0 } else { 1.0 });
}

fn run_check(
    s: &Scenario,
    check: CheckKind,
    opts: RunOptions,
    q: &mut BTreeMap<String, f64>,
    extra: &mut Vec<VerifierReport>,
) -> Result<VerifierReport> {
    let sm = &s.sampling;
    let hyp = s.hypothesis;
    match check {
        CheckKind::Curvature => {
            let tol = if s.chart.has_analytic_jet() { 1e-7 } else { 1e-6 };
            let mut report = VerifierReport::new("curvature", s.id, 0.0);
            let n = s.chart.dim();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (i, x) in sample_points(s)?.iter().enumerate() {
                for a in 0..n {
                    for b in a + 1..n {
                        let sec = sectional_curvature(&s.chart, x, &DVector::from_fn(n, |j, _| (j == a) as u8 as f64), &DVector::from_fn(n, |j, _| (j == b) as u8 as f64))?;
                        let p = [("point", i as f64), ("a", a as f64), ("b", b as f64)];
                        match sm.constant_curvature {
                            Some(k) => report.expect("sectional", &p, sec, k, tol),
                            None => report.observe("sectional", &p, sec),
                        }
                        lo = lo.min(sec);
                        hi = hi.max(sec);
                    }
                }
            }
            q.insert("min_sectional_curvature".into(), lo);
            q.insert("max_sectional_curvature".into(), hi);
            report.quantity("min_sectional_curvature", lo);
            report.quantity("max_sectional_curvature", hi);
            Ok(report)
        }
        CheckKind::RicEigensum => {
            let rep = verify_ric_k_eigensum(&s.chart, hyp.k, &sample_points(s)?, 20, sm.ric_trials, sm.seed, s.id)?;
            Ok(rep)
        }
        CheckKind::JacobiModel => {
            let k = sm.constant_curvature.ok_or_else(|| Error::InvalidInput(format!("scenario {} is not a space form", s.id)))?;
            let mut fams = point_source_families(&s.chart, &sm.lemma_point)?;
            fams.extend(random_families(&s.chart, &sm.lemma_point, sm.random_families.min(10), sm.seed)?);
            let n_steps = (sm.lemma_t_max / 0.25).floor() as usize;
            let times: Vec<f64> = (1..=n_steps).map(|i| 0.25 * i as f64).chain(std::iter::once(sm.lemma_t_max)).collect();
            let parts = crate::par_map(opts.jobs, &fams, |_, f| -> Result<VerifierReport> {
                let ev = evolve(f, sm.lemma_t_max)?;
                verify_jacobi_model(&ev, k, &times, s.id, 1e-6)
            });
            let mut report = VerifierReport::new("jacobi-model", s.id, 0.0);
            for (i, p) in parts.into_iter().enumerate() {
                absorb(&mut report, &p?, &format!("family{i}"));
            }
            report.quantity("max_deviation", report.samples.iter().map(|r| r.lhs).fold(0.0, f64::max));
            q.insert("jacobi_model_max_deviation".into(), report.quantities["max_deviation"]);
            Ok(report)
        }
        CheckKind::ComparisonLemma => comparison_lemma(s, opts, q, extra),
        CheckKind::FocalRadius => {
            let sub = need_sub(s, check)?;
            let samples = samples(s, sub)?;
            let fr = focal_radius(sub, &samples, sm.t_max, opts.jobs)?;
            let mut report = VerifierReport::new("focal-radius", s.id, 0.0);
            for (smp, r) in samples.iter().zip(&fr.reports) {
                let rep = r.as_ref().map_err(|e| Error::InvalidInput(format!("focal scan at u = {:?} failed: {e}", smp.u)))?;
                let mut p = u_params(&smp.u);
                p.push(("multiplicity", rep.focal_times.first().map_or(0.0, |f| f.multiplicity as f64)));
                report.observe("first_focal_time", &p, rep.first.value());
            }
            record_distance(q, "focal_radius", fr.radius);
            report.quantity("focal_radius", fr.radius.value());
            report.quantity("t_max", sm.t_max);
            report.note(format!("focal radius {} (scan horizon {})", fr.radius, sm.t_max));
            Ok(report)
        }
        CheckKind::SecondFundamentalForm => {
            let sub = need_sub(s, check)?;
            let mut report = VerifierReport::new("second-fundamental-form", s.id, 0.0);
            let mut max: f64 = 0.0;
            for u in &sm.params {
                let ii = second_fundamental_form_norm(sub, u)?;
                report.observe("norm", &u_params(u), ii);
                max = max.max(ii);
            }
            let first = sub.tangent_normal_split(&sm.params[0])?;
            let op = shape_operator(sub, &sm.params[0], &first.normal[0])?;
            let eig = sym_eigen(&op)?;
            for (i, l) in eig.values.iter().enumerate() {
                report.quantity(format!("principal_curvature_{i}"), *l);
            }
            report.quantity("second_fundamental_form", max);
            q.insert("second_fundamental_form".into(), max);
            Ok(report)
        }
        CheckKind::ShapeBound => {
            let sub = need_sub(s, check)?;
            let rep = verify_shape_bound(sub, hyp, &samples(s, sub)?, sm.t_max, s.id, 1e-6, opts.jobs)?;
            q.insert("max_abs_partial_trace".into(), rep.quantities["max_abs_partial_trace"]);
            q.insert("shape_bound_worst_margin".into(), rep.worst_margin());
            Ok(rep)
        }
        CheckKind::FocalPi2 => {
            let sub = need_sub(s, check)?;
            let rep = verify_focal_pi_over_2(sub, hyp, &samples(s, sub)?, s.id, 1e-3, opts.jobs)?;
            q.insert("min_focal_count".into(), rep.quantities["min_focal_count"]);
            Ok(rep)
        }
        CheckKind::Soul => {
            let sub = need_sub(s, check)?;
            let sopts = SoulOptions { normals_per_point: sm.normals_per_point, strip_len: sm.t_max.min(10.0), ..SoulOptions::default() };
            match (soul_checks(sub, hyp, &sm.params, sm.t_max, s.id, sopts, opts.jobs), sm.soul_expect_infinite) {
                (Ok(rep), _) => Ok(rep),
                (Err(Error::NotInfiniteFocal { t }), false) => {
                    let mut rep = VerifierReport::new("soul", s.id, 0.0);
                    rep.observe("not_infinite_focal", &[("t", t)], t);
                    rep.quantity("focal_time", t);
                    rep.note(format!("focal point at t = {t}: soul checks do not apply, as expected"));
                    Ok(rep)
                }
                (Err(e), _) => Err(e),
            }
        }
        CheckKind::Tube => {
            let sub = need_sub(s, check)?;
            let spec = sm.tube.as_ref().ok_or_else(|| Error::InvalidInput(format!("scenario {} has no tube specification", s.id)))?;
            let tv = tube_volume(sub, spec.radius, &spec.quadrature, opts.jobs)?;
            let mut rep = VerifierReport::new("tube", s.id, 0.0);
            rep.observe("volume", &[("r", spec.radius)], tv.value);
            rep.quantity("tube_radius", spec.radius);
            rep.quantity("tube_volume", tv.value);
            rep.quantity("coarse_value", tv.coarse_value);
            rep.quantity("error_estimate", tv.error_estimate);
            if tv.focal_inside {
                rep.note("a focal point lies inside the tube: the value overestimates the volume");
            }
            q.insert("tube_volume".into(), tv.value);
            q.insert("tube_error_estimate".into(), tv.error_estimate);
            q.insert("tube_focal_inside".into(), tv.focal_inside as u8 as f64);
            Ok(rep)
        }
        CheckKind::ConjugateRadius => {
            let Subject::Base { x, directions } = &s.subject else {
                return Err(Error::InvalidInput(format!("scenario {} is not a submersion base", s.id)));
            };
            let dirs = unit_directions(&s.chart, x, *directions)?;
            let cr = base_conjugate_radius(&s.chart, x, &dirs, sm.t_max, opts.jobs)?;
            let mut rep = VerifierReport::new("conjugate-radius", s.id, 0.0);
            for (i, f) in cr.first_times.iter().enumerate() {
                rep.observe("first_conjugate_time", &[("direction", i as f64)], f.value());
            }
            rep.quantity("conjugate_radius", cr.radius.value());
            rep.note(format!("conjugate radius {} (scan horizon {})", cr.radius, sm.t_max));
            record_distance(q, "conjugate_radius", cr.radius);
            Ok(rep)
        }
    }
}

fn absorb(into: &mut VerifierReport, from: &VerifierReport, prefix: &str) {
    for rec in &from.samples {
        let params: Vec<(&str, f64)> = rec.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        into.record(format!("{prefix}:{}", rec.label), &params, rec.lhs, rec.rhs);
    }
    into.notes.extend(from.notes.iter().map(|n| format!("{prefix}: {n}")));
}

fn point_source_families(chart: &Chart, x: &[f64]) -> Result<Vec<LagrangianFamily>> {
    let g = chart.metric_at(x)?;
    complete_basis(&[], &g).iter().map(|v| LagrangianFamily::point_source(chart, x, v)).collect()
}

/// Seeded families `A0 = I`, `A0'` symmetric with entries in `[−1, 1]`,
/// along random unit directions at `x`.
pub fn random_families(chart: &Chart, x: &[f64], count: usize, seed: u64) -> Result<Vec<LagrangianFamily>> {
    let mut r = rng(seed, 2);
    let d = chart.dim() - 1;
    (0..count)
        .map(|_| {
            let v = random_unit(chart, x, &mut r)?;
            let mut b = DMatrix::zeros(d, d);
            for i in 0..d {
                for j in i..d {
                    let e = r.gen_range(-1.0..1.0);
                    b[(i, j)] = e;
                    b[(j, i)] = e;
                }
            }
            LagrangianFamily::custom(chart, x, &v, DMatrix::identity(d, d), b)
        })
        .collect()
}

fn comparison_lemma(s: &Scenario, opts: RunOptions, q: &mut BTreeMap<String, f64>, extra: &mut Vec<VerifierReport>) -> Result<VerifierReport> {
    let sm = &s.sampling;
    let mut primary = match &s.subject {
        Subject::Submanifold(sub) => samples(s, sub)?.iter().map(|n| lambda_n(sub, &n.u, &n.v)).collect::<Result<Vec<_>>>()?,
        _ => point_source_families(&s.chart, &sm.lemma_point)?,
    };
    let n_primary = primary.len();
    primary.extend(random_families(&s.chart, &sm.lemma_point, sm.random_families, sm.seed)?);
    let grid = sm.grid();
    let lemma = LemmaOptions::default();
    let parts = crate::par_map(opts.jobs, &primary, |_, f| -> Result<(VerifierReport, f64)> {
        let ev = evolve(f, sm.lemma_t_max)?;
        let rep = verify_comparison_lemma(&ev, s.hypothesis, &grid, s.id, lemma)?;
        Ok((rep, ev.max_wronskian_defect(50)))
    });
    let mut report = VerifierReport::new("comparison-lemma", s.id, lemma.tolerance);
    let mut primary_margin: f64 = 0.0;
    let mut max_wronskian: f64 = 0.0;
    let mut wronskian = VerifierReport::new("wronskian", s.id, 0.0);
    for (i, p) in parts.into_iter().enumerate() {
        let (rep, w) = p?;
        let prefix = if i < n_primary { format!("primary{i}") } else { format!("random{}", i - n_primary) };
        if i < n_primary {
            primary_margin = primary_margin.max(rep.max_abs_margin());
        }
        absorb(&mut report, &rep, &prefix);
        max_wronskian = max_wronskian.max(w);
        wronskian.record(prefix, &[], w, 1e-8);
    }
    wronskian.quantity("max_wronskian_defect", max_wronskian);
    extra.push(wronskian);
    report.quantity("families", primary.len() as f64);
    report.quantity("primary_max_abs_margin", primary_margin);
    q.insert("lemma_primary_max_abs_margin".into(), primary_margin);
    q.insert("lemma_worst_margin".into(), report.worst_margin());
    q.insert("max_wronskian_defect".into(), max_wronskian);
    Ok(report)
}

/// `Ric_k` as an eigenvalue sum against brute force: at `count` points near
/// `points` with random unit directions, the eigenvalue sum is at most every
/// one of `trials` random orthonormal `k`-frame sums (up to 1e-6), and equals
/// the sum over the bottom eigenvector frame (within 1e-8).
pub fn verify_ric_k_eigensum(
    chart: &Chart,
    k: usize,
    points: &[Vec<f64>],
    count: usize,
    trials: usize,
    seed: u64,
    scenario: &str,
) -> Result<VerifierReport> {
    let mut r = rng(seed, 3);
    let n = chart.dim();
    let mut report = VerifierReport::new("ric-eigensum", scenario, 0.0);
    let mut i = 0;
    let mut attempts = 0;
    while i < count {
        attempts += 1;
        if attempts > 100 * count {
            return Err(Error::InvalidInput("could not sample points inside the chart".into()));
        }
        let base = &points[i % points.len()];
        let x: Vec<f64> = base.iter().map(|c| c + r.gen_range(-0.1..0.1)).collect();
        if !chart.contains(&x) || chart.metric_at(&x).is_err() {
            continue;
        }
        let v = random_unit(chart, &x, &mut r)?;
        let rm = riemann(chart, &x)?;
        let g = rm.metric().clone();
        let eig_sum = ric_k(chart, &x, &v, k)?;
        let mut brute = f64::INFINITY;
        for _ in 0..trials {
            let mut cand = vec![v.clone()];
            cand.extend((0..k).map(|_| DVector::from_fn(n, |_, _| r.gen_range(-1.0..1.0))));
            let Ok(frame) = orthonormalize(&cand, &g) else { continue };
            let sum: f64 = frame[1..].iter().map(|e| rm.form(e, &v, &v, e)).sum();
            brute = brute.min(sum);
        }
        let op = directional_curvature_operator(chart, &x, &v)?;
        let eig = sym_eigen(&op.matrix)?;
        let bottom: f64 = (0..k)
            .map(|c| {
                let e = op.basis.iter().enumerate().fold(DVector::zeros(n), |acc, (j, b)| acc + b * eig.vectors[(j, c)]);
                rm.form(&e, &v, &v, &e)
            })
            .sum();
        let p = [("point", i as f64)];
        report.record("eigensum_minus_random_frames", &p, eig_sum - brute, 1e-6);
        report.record("eigensum_vs_eigenvector_frame", &p, (eig_sum - bottom).abs(), 1e-8);
        i += 1;
    }
    report.quantity("points", count as f64);
    report.quantity("frames_per_point", trials as f64);
    Ok(report)
}

fn expected_report(s: &Scenario, q: &BTreeMap<String, f64>) -> Option<VerifierReport> {
    let mut report = VerifierReport::new("expected", s.id, 0.0);
    for e in &s.expected {
        let key = match e.value {
            ExpectedValue::Unbounded => format!("{}_unbounded", e.quantity),
            _ => e.quantity.to_string(),
        };
        let Some(&c) = q.get(&key) else { continue };
        match e.value {
            ExpectedValue::Equal(v) => report.expect(e.quantity, &[], c, v, e.tolerance),
            ExpectedValue::AtLeast(v) => report.record(e.quantity, &[], v, c + e.tolerance),
            ExpectedValue::Unbounded => report.record(e.quantity, &[], 1.0, c),
        }
        report.note(format!("{}: {} ({})", e.quantity, e.oracle, serde_json::to_value(e.provenance).ok()?.as_str()?));
    }
    (!report.samples.is_empty()).then_some(report)
}
