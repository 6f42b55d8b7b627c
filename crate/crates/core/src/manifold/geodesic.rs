//! Unit-speed geodesics with a parallel orthonormal frame.

use nalgebra::{DMatrix, DVector};

use super::chart::Chart;
use super::curvature::Christoffel;
use crate::error::{Error, Result};
use crate::numerics::linalg::{complete_basis, ip};
use crate::numerics::{integrate_ode_projected, Tolerances, Trajectory};

/// Position, velocity and parallel frame at one parameter value.
#[derive(Debug, Clone)]
pub struct FramePoint {
    pub t: f64,
    pub x: DVector<f64>,
    pub v: DVector<f64>,
    /// Orthonormal basis of `v^⊥`.
    pub frame: Vec<DVector<f64>>,
}

/// A geodesic `γ` with parallel frame `E_1, …, E_{n−1}` of `γ'^⊥`.
///
/// The state vector stores `(x, v, E_1, …, E_{n−1})` contiguously.
#[derive(Debug, Clone)]
pub struct FramedGeodesic {
    chart: Chart,
    traj: Trajectory,
}

impl FramedGeodesic {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn span(&self) -> (f64, f64) {
        (self.traj.t_start(), self.traj.t_end())
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn at(&self, t: f64) -> Result<FramePoint> {
        let n = self.chart.dim();
        let (a, b) = self.span();
        let mut y = self.traj.eval(t).ok_or(Error::InvalidSpan { start: a, end: b })?;
        let g = self.chart.metric_at(&y[..n])?;
        orthonormalize_state(&g, n, n - 1, &mut y);
        Ok(unpack(t, n, n - 1, &y))
    }

    pub fn position(&self, t: f64) -> Result<DVector<f64>> {
        Ok(self.at(t)?.x)
    }

    pub fn end(&self) -> FramePoint {
        let n = self.chart.dim();
        unpack(self.traj.t_end(), n, n - 1, self.traj.final_state())
    }

    /// Nodes of the adaptive integration as frame points.
    pub fn nodes(&self) -> impl Iterator<Item = FramePoint> + '_ {
        let n = self.chart.dim();
        self.traj.times().iter().zip(self.traj.states()).map(move |(t, y)| unpack(*t, n, n - 1, y))
    }

    /// Largest deviation from `⟨v,v⟩ = 1`, `⟨E_i,E_j⟩ = δ_ij`, `⟨E_i,v⟩ = 0`
    /// over the stored nodes and `extra` interior samples.
    pub fn frame_defect(&self, extra: usize) -> Result<f64> {
        let (a, b) = self.span();
        let mut worst: f64 = 0.0;
        let n = self.chart.dim();
        let mut points: Vec<FramePoint> = self.nodes().collect();
        for i in 0..extra {
            let t = a + (b - a) * (i as f64 + 0.5) / extra as f64;
            let y = self.traj.eval(t).expect("inside span");
            points.push(unpack(t, n, n - 1, &y));
        }
        for p in points {
            let g = self.chart.metric_at(p.x.as_slice())?;
            worst = worst.max((ip(&g, &p.v, &p.v) - 1.0).abs());
            for (i, e) in p.frame.iter().enumerate() {
                worst = worst.max(ip(&g, e, &p.v).abs());
                for (j, f) in p.frame.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((ip(&g, e, f) - target).abs());
                }
            }
        }
        Ok(worst)
    }
}

pub(crate) fn unpack(t: f64, n: usize, frames: usize, y: &[f64]) -> FramePoint {
    FramePoint {
        t,
        x: DVector::from_column_slice(&y[..n]),
        v: DVector::from_column_slice(&y[n..2 * n]),
        frame: (0..frames).map(|i| DVector::from_column_slice(&y[(2 + i) * n..(3 + i) * n])).collect(),
    }
}

/// Writes `(x', v', E_i')` for the geodesic and parallel-transport equations.
pub(crate) fn geodesic_rhs(chart: &Chart, frames: usize, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
    let n = chart.dim();
    let jet = chart.first_jet(&y[..n]).map_err(|e| match e {
        Error::OutsideChart { .. } | Error::MetricNotPD { .. } => Error::LeftChartDomain { t },
        other => other,
    })?;
    let gamma = Christoffel::from_jet(&jet)?;
    let v = &y[n..2 * n];
    dy[..n].copy_from_slice(v);
    let mut acc = vec![0.0; n];
    gamma.contract(v, v, &mut acc);
    for k in 0..n {
        dy[n + k] = -acc[k];
    }
    for f in 0..frames {
        let e = &y[(2 + f) * n..(3 + f) * n];
        gamma.contract(v, e, &mut acc);
        for k in 0..n {
            dy[(2 + f) * n + k] = -acc[k];
        }
    }
    Ok(())
}

/// Renormalize `v` and re-orthonormalize the frame against `g` (with `v` first).
pub(crate) fn orthonormalize_state(g: &DMatrix<f64>, n: usize, frames: usize, y: &mut [f64]) {
    let mut v = DVector::from_column_slice(&y[n..2 * n]);
    let len = ip(g, &v, &v).sqrt();
    if !(len > 0.0) {
        return;
    }
    v /= len;
    y[n..2 * n].copy_from_slice(v.as_slice());
    let mut basis = vec![v];
    for f in 0..frames {
        let mut e = DVector::from_column_slice(&y[(2 + f) * n..(3 + f) * n]);
        for _ in 0..2 {
            for b in &basis {
                let c = ip(g, b, &e);
                e.axpy(-c, b, 1.0);
            }
        }
        let len = ip(g, &e, &e).sqrt();
        if !(len > 1e-8) {
            return;
        }
        e /= len;
        y[(2 + f) * n..(3 + f) * n].copy_from_slice(e.as_slice());
        basis.push(e);
    }
}

fn check_initial(chart: &Chart, x0: &[f64], v0: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = chart.dim();
    if v0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v0.len() });
    }
    let g = chart.metric_at(x0)?;
    let speed = ip(&g, v0, v0).sqrt();
    if (speed - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!("initial velocity must be unit, has length {speed}")));
    }
    Ok(g)
}

/// Unit-speed geodesic from `x0` with velocity `v0`, carrying a parallel frame
/// that starts from a deterministic completion of `v0`.
pub fn geodesic(chart: &Chart, x0: &[f64], v0: &DVector<f64>, span: (f64, f64)) -> Result<FramedGeodesic> {
    let g = check_initial(chart, x0, v0)?;
    let unit = v0 / ip(&g, v0, v0).sqrt();
    let mut frame = complete_basis(&[unit], &g);
    frame.remove(0);
    geodesic_with_frame(chart, x0, v0, &frame, span, Tolerances::default())
}

/// Geodesic with a caller-supplied initial frame of `v0^⊥`.
pub fn geodesic_with_frame(
    chart: &Chart,
    x0: &[f64],
    v0: &DVector<f64>,
    frame0: &[DVector<f64>],
    span: (f64, f64),
    tol: Tolerances,
) -> Result<FramedGeodesic> {
    let n = chart.dim();
    let g = check_initial(chart, x0, v0)?;
    if frame0.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: frame0.len() });
    }
    for (i, e) in frame0.iter().enumerate() {
        if ip(&g, e, v0).abs() > 1e-8 {
            return Err(Error::InvalidInput("frame must be orthogonal to the velocity".into()));
        }
        for (j, f) in frame0.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            if (ip(&g, e, f) - target).abs() > 1e-8 {
                return Err(Error::InvalidInput("frame must be orthonormal".into()));
            }
        }
    }
    let mut y0 = Vec::with_capacity(n * (n + 1));
    y0.extend_from_slice(x0);
    y0.extend_from_slice(v0.as_slice());
    for e in frame0 {
        y0.extend_from_slice(e.as_slice());
    }
    let frames = n - 1;
    let traj = integrate_ode_projected(
        |t, y, dy| geodesic_rhs(chart, frames, t, y, dy),
        &y0,
        span,
        tol,
        |_, y| {
            if let Ok(g) = chart.metric_at(&y[..n]) {
                orthonormalize_state(&g, n, frames, y);
            }
        },
    )?;
    Ok(FramedGeodesic { chart: chart.clone(), traj })
}

/// Parallel transport of `w` from the start of `geod` to parameter `t`.
pub fn parallel_transport(geod: &FramedGeodesic, w: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    let (t0, _) = geod.span();
    let start = geod.at(t0)?;
    let g0 = geod.chart().metric_at(start.x.as_slice())?;
    let end = geod.at(t)?;
    let mut out = &end.v * ip(&g0, w, &start.v);
    for (e0, e) in start.frame.iter().zip(&end.frame) {
        out.axpy(ip(&g0, w, e0), e, 1.0);
    }
    Ok(out)
}
