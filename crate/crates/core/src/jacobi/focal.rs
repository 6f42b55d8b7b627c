use nalgebra::DVector;

use super::{evolve, lambda_n, JacobiEvolution};
use crate::error::{Error, Result};
use crate::numerics::quadrature::sphere_design;
use crate::numerics::{bracketed_root, golden_min, singular_values};
use crate::submanifold::EmbeddedSubmanifold;

/// Relative smallest-singular-value threshold for accepting a focal point.
pub const DEFAULT_DET_TOL: f64 = 1e-8;
/// Start of the scan when `A(0)` is singular by construction.
pub const START_EXCLUSION: f64 = 1e-4;

/// A focal distance, or a lower bound when none was found before `T_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FocalDistance {
    Finite(f64),
    AtLeast(f64),
}

impl FocalDistance {
    pub fn value(self) -> f64 {
        match self {
            FocalDistance::Finite(t) | FocalDistance::AtLeast(t) => t,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FocalDistance::Finite(_))
    }

    pub fn min(self, other: FocalDistance) -> FocalDistance {
        use FocalDistance::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), AtLeast(b)) | (AtLeast(b), Finite(a)) => {
                if a <= b {
                    Finite(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

impl std::fmt::Display for FocalDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FocalDistance::Finite(t) => write!(f, "{t}"),
            FocalDistance::AtLeast(t) => write!(f, ">= {t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalTime {
    pub t: f64,
    /// `dim ker A(t)`.
    pub multiplicity: usize,
}

/// Zeros of `det A` on `(0, T_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalReport {
    pub t_max: f64,
    pub first: FocalDistance,
    pub focal_times: Vec<FocalTime>,
    pub total_count: usize,
}

impl FocalReport {
    /// Multiplicities summed over focal times `≤ t`.
    pub fn count_within(&self, t: f64) -> usize {
        self.focal_times.iter().filter(|f| f.t <= t).map(|f| f.multiplicity).sum()
    }
}

fn relative_sigma(ev: &JacobiEvolution, t: f64) -> (f64, DVector<f64>) {
    match ev.a(t) {
        Ok(a) => {
            let s = singular_values(&a);
            let scale = s[0].max(1.0);
            (s[s.len() - 1] / scale, s / scale)
        }
        Err(_) => (f64::INFINITY, DVector::zeros(0)),
    }
}

/// Locate focal times of an evolution on `(0, t_max]`.
///
/// Sign changes of `det A` on a uniform grid of `max(200, 50·t_max)` cells are
/// refined by bisection; local minima of the relative smallest singular value
/// are refined by golden-section search and accepted below `det_tol`, which
/// catches even-multiplicity touches.
pub fn focal_report(ev: &JacobiEvolution, t_max: f64, det_tol: f64) -> FocalReport {
    let t_max = t_max.min(ev.t_max());
    let t_lo = if ev.family().singular_at_start() { START_EXCLUSION } else { 0.0 };
    let mut focal_times = Vec::new();
    if t_max > t_lo {
        let cells = ((50.0 * t_max).ceil() as usize).max(200);
        let grid: Vec<f64> = (0..=cells).map(|i| t_lo + (t_max - t_lo) * i as f64 / cells as f64).collect();
        let dets: Vec<f64> = grid.iter().map(|&t| ev.det(t).unwrap_or(f64::NAN)).collect();
        let sig: Vec<f64> = grid.iter().map(|&t| relative_sigma(ev, t).0).collect();

        let mut candidates: Vec<f64> = Vec::new();
        for i in 0..cells {
            let (a, b) = (dets[i], dets[i + 1]);
            if a == 0.0 && i > 0 {
                candidates.push(grid[i]);
            } else if a * b < 0.0 {
                if let Ok(t) = bracketed_root(|t| ev.det(t).unwrap_or(f64::NAN), (grid[i], grid[i + 1]), 1e-13) {
                    candidates.push(t);
                }
            }
        }
        for i in 1..=cells {
            let left = sig[i] < sig[i - 1];
            let right = i == cells || sig[i] <= sig[i + 1];
            if left && right {
                let hi = grid[(i + 1).min(cells)];
                let (t, s) = golden_min(|t| relative_sigma(ev, t).0, grid[i - 1], hi, 1e-12);
                if s < det_tol {
                    candidates.push(t);
                }
            }
        }
        candidates.sort_by(f64::total_cmp);
        let mut merged: Vec<f64> = Vec::new();
        for t in candidates {
            match merged.last_mut() {
                Some(last) if t - *last < 1e-7 => {
                    if relative_sigma(ev, t).0 < relative_sigma(ev, *last).0 {
                        *last = t;
                    }
                }
                _ => merged.push(t),
            }
        }
        for t in merged {
            let (_, s) = relative_sigma(ev, t);
            let multiplicity = s.iter().filter(|v| **v < det_tol).count().max(1);
            focal_times.push(FocalTime { t, multiplicity });
        }
    }
    let first = focal_times.first().map_or(FocalDistance::AtLeast(t_max), |f| FocalDistance::Finite(f.t));
    let total_count = focal_times.iter().map(|f| f.multiplicity).sum();
    FocalReport { t_max, first, focal_times, total_count }
}

/// A base parameter with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalSample {
    pub u: Vec<f64>,
    pub v: DVector<f64>,
}

/// Unit normals at each parameter point: `±ν` in codimension one, otherwise
/// a deterministic design of `per_point` directions.
pub fn normal_samples(sub: &EmbeddedSubmanifold, params: &[Vec<f64>], per_point: usize) -> Result<Vec<NormalSample>> {
    let codim = sub.codim();
    let mut out = Vec::new();
    for u in params {
        let frame = sub.tangent_normal_split(u)?;
        let dirs: Vec<DVector<f64>> = if codim == 1 {
            vec![frame.normal[0].clone(), -&frame.normal[0]]
        } else {
            sphere_design(codim, per_point.max(1))
                .into_iter()
                .map(|(c, _)| frame.normal_from(c.as_slice()))
                .collect()
        };
        out.extend(dirs.into_iter().map(|v| NormalSample { u: u.clone(), v }));
    }
    Ok(out)
}

/// Infimum of first focal times over sampled normal geodesics.
#[derive(Debug, Clone)]
pub struct FocalRadius {
    pub radius: FocalDistance,
    /// Index into `samples` of the minimizing geodesic.
    pub minimizer: Option<usize>,
    pub samples: Vec<NormalSample>,
    pub reports: Vec<std::result::Result<FocalReport, String>>,
}

pub fn focal_radius(sub: &EmbeddedSubmanifold, samples: &[NormalSample], t_max: f64, jobs: usize) -> Result<FocalRadius> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("focal radius needs at least one sample".into()));
    }
    let reports: Vec<std::result::Result<FocalReport, String>> = crate::par_map(jobs, samples, |_, s| {
        let family = lambda_n(sub, &s.u, &s.v).map_err(|e| e.to_string())?;
        let ev = evolve(&family, t_max).map_err(|e| e.to_string())?;
        Ok(focal_report(&ev, t_max, DEFAULT_DET_TOL))
    });
    let mut radius: Option<FocalDistance> = None;
    let mut minimizer = None;
    for (i, r) in reports.iter().enumerate() {
        if let Ok(rep) = r {
            let better = match radius {
                None => true,
                Some(cur) => rep.first.min(cur) != cur,
            };
            if better {
                radius = Some(rep.first);
                minimizer = Some(i);
            }
        }
    }
    let radius = radius.ok_or_else(|| {
        let first_err = reports.iter().find_map(|r| r.as_ref().err().cloned()).unwrap_or_default();
        Error::InvalidInput(format!("every focal-radius sample failed: {first_err}"))
    })?;
    Ok(FocalRadius { radius, minimizer, samples: samples.to_vec(), reports })
}
