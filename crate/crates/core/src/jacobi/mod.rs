//! Matrix Jacobi systems `A'' + R(t) A = 0` in a parallel frame.

mod focal;

pub use focal::{focal_radius, focal_report, normal_samples, FocalDistance, FocalRadius, FocalReport, FocalTime, NormalSample, DEFAULT_DET_TOL};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::manifold::geodesic::{geodesic_rhs, orthonormalize_state, unpack};
use crate::manifold::{Chart, FramePoint, Riemann};
use crate::numerics::linalg::{asymmetry, complete_basis, ip, symmetrize};
use crate::numerics::{integrate_ode_projected, singular_values, sym_eigen, Tolerances, Trajectory};
use crate::submanifold::{shape_operator, EmbeddedSubmanifold};

/// Tolerances used by [`evolve`].
pub const JACOBI_TOLERANCES: Tolerances = Tolerances { rel: 1e-11, abs: 1e-13 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `Λ_N` of a submanifold.
    Submanifold { tangent_dim: usize },
    /// Fields vanishing at `t = 0`.
    PointSource,
    Custom,
}

/// Initial data `(A(0), A'(0))` of an `(n−1)`-dimensional family of normal
/// Jacobi fields, in the frame `frame0` of `v0^⊥`.
#[derive(Debug, Clone)]
pub struct LagrangianFamily {
    chart: Chart,
    x0: DVector<f64>,
    v0: DVector<f64>,
    frame0: Vec<DVector<f64>>,
    a0: DMatrix<f64>,
    a0_prime: DMatrix<f64>,
    kind: FamilyKind,
}

impl LagrangianFamily {
    /// Checks the Lagrangian condition `A0ᵀA0' = A0'ᵀA0` and full rank of `(A0; A0')`.
    pub fn new(
        chart: &Chart,
        x0: &[f64],
        v0: &DVector<f64>,
        frame0: Vec<DVector<f64>>,
        a0: DMatrix<f64>,
        a0_prime: DMatrix<f64>,
        kind: FamilyKind,
    ) -> Result<Self> {
        let n = chart.dim();
        let d = n - 1;
        if a0.shape() != (d, d) || a0_prime.shape() != (d, d) {
            return Err(Error::DimensionMismatch { expected: d, got: a0.nrows().max(a0_prime.nrows()) });
        }
        if frame0.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: frame0.len() });
        }
        let w = a0.transpose() * &a0_prime;
        let defect = asymmetry(&w);
        if defect > 1e-10 * (1.0 + a0.norm() * a0_prime.norm()) {
            return Err(Error::NotLagrangian { reason: format!("A0ᵀA0' is not symmetric (defect {defect:.3e})") });
        }
        let mut stacked = DMatrix::zeros(2 * d, d);
        stacked.view_mut((0, 0), (d, d)).copy_from(&a0);
        stacked.view_mut((d, 0), (d, d)).copy_from(&a0_prime);
        let sigma = singular_values(&stacked);
        if sigma[d - 1] <= 1e-10 * sigma[0].max(1.0) {
            return Err(Error::NotLagrangian { reason: "columns of (A0; A0') are dependent".into() });
        }
        Ok(LagrangianFamily {
            chart: chart.clone(),
            x0: DVector::from_column_slice(x0),
            v0: v0.clone(),
            frame0,
            a0,
            a0_prime,
            kind,
        })
    }

    /// `J(0) = 0`, `J'(0)` arbitrary: `A0 = 0`, `A0' = I`.
    pub fn point_source(chart: &Chart, x0: &[f64], v0: &DVector<f64>) -> Result<Self> {
        let g = chart.metric_at(x0)?;
        let unit = v0 / ip(&g, v0, v0).sqrt();
        let mut frame = complete_basis(&[unit], &g);
        frame.remove(0);
        let d = chart.dim() - 1;
        Self::new(chart, x0, v0, frame, DMatrix::zeros(d, d), DMatrix::identity(d, d), FamilyKind::PointSource)
    }

    /// Arbitrary initial data in the default frame of `v0^⊥`.
    pub fn custom(chart: &Chart, x0: &[f64], v0: &DVector<f64>, a0: DMatrix<f64>, a0_prime: DMatrix<f64>) -> Result<Self> {
        let g = chart.metric_at(x0)?;
        let unit = v0 / ip(&g, v0, v0).sqrt();
        let mut frame = complete_basis(&[unit], &g);
        frame.remove(0);
        Self::new(chart, x0, v0, frame, a0, a0_prime, FamilyKind::Custom)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn start(&self) -> (&DVector<f64>, &DVector<f64>) {
        (&self.x0, &self.v0)
    }

    pub fn frame0(&self) -> &[DVector<f64>] {
        &self.frame0
    }

    pub fn a0(&self) -> &DMatrix<f64> {
        &self.a0
    }

    pub fn a0_prime(&self) -> &DMatrix<f64> {
        &self.a0_prime
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Whether `A(0)` is singular by construction.
    pub fn singular_at_start(&self) -> bool {
        let s = singular_values(&self.a0);
        s[s.len() - 1] <= 1e-12 * s[0].max(1.0)
    }

    /// The same fields along `t ↦ γ(−t)`: velocity `−v`, `A0` kept, `A0'` negated.
    pub fn reversed(&self) -> Self {
        LagrangianFamily {
            v0: -&self.v0,
            a0_prime: -&self.a0_prime,
            ..self.clone()
        }
    }
}

/// `Λ_N` for the normal geodesic leaving `F(u)` in direction `v`.
///
/// The frame is (tangent basis of `N`, normals orthogonal to `v`), with
/// `A0 = diag(I_m, 0)` and `A0' = diag(−S_v, I)`, where `S_v` is the shape
/// operator of [`shape_operator`] (the sign makes inward normals of round
/// spheres focus at their centers).
pub fn lambda_n(sub: &EmbeddedSubmanifold, u: &[f64], v: &DVector<f64>) -> Result<LagrangianFamily> {
    let s = shape_operator(sub, u, v)?;
    let split = sub.tangent_normal_split(u)?;
    let frame = split.adapted_frame(v);
    let m = sub.param_dim();
    let d = sub.ambient().dim() - 1;
    let mut a0 = DMatrix::zeros(d, d);
    let mut a0p = DMatrix::zeros(d, d);
    for i in 0..d {
        if i < m {
            a0[(i, i)] = 1.0;
        } else {
            a0p[(i, i)] = 1.0;
        }
    }
    a0p.view_mut((0, 0), (m, m)).copy_from(&(-s));
    LagrangianFamily::new(
        sub.ambient(),
        split.point.as_slice(),
        v,
        frame,
        a0,
        a0p,
        FamilyKind::Submanifold { tangent_dim: m },
    )
}

/// `A(t)` and `A'(t)` together with the geodesic data.
#[derive(Debug, Clone)]
pub struct JacobiPoint {
    pub geodesic: FramePoint,
    pub a: DMatrix<f64>,
    pub a_prime: DMatrix<f64>,
}

/// Solution of the matrix Jacobi equation over `[0, T]`.
#[derive(Debug, Clone)]
pub struct JacobiEvolution {
    family: LagrangianFamily,
    traj: Trajectory,
}

/// Riccati operator with the asymmetry measured before symmetrization.
#[derive(Debug, Clone)]
pub struct RiccatiValue {
    pub s: DMatrix<f64>,
    pub asymmetry: f64,
}

fn geo_len(n: usize) -> usize {
    n * (n + 1)
}

fn curvature_in_frame(chart: &Chart, p: &FramePoint) -> Result<DMatrix<f64>> {
    let r = Riemann::from_jet(&chart.jet(p.x.as_slice())?)?;
    Ok(symmetrize(&r.operator_in_frame(&p.v, &p.frame)))
}

/// Integrate the family on `[0, t_max]`.
pub fn evolve(family: &LagrangianFamily, t_max: f64) -> Result<JacobiEvolution> {
    evolve_with(family, t_max, JACOBI_TOLERANCES)
}

pub fn evolve_with(family: &LagrangianFamily, t_max: f64, tol: Tolerances) -> Result<JacobiEvolution> {
    let chart = &family.chart;
    let n = chart.dim();
    let d = n - 1;
    let gl = geo_len(n);
    let mut y0 = Vec::with_capacity(gl + 2 * d * d);
    y0.extend_from_slice(family.x0.as_slice());
    y0.extend_from_slice(family.v0.as_slice());
    for e in &family.frame0 {
        y0.extend_from_slice(e.as_slice());
    }
    y0.extend_from_slice(family.a0.as_slice());
    y0.extend_from_slice(family.a0_prime.as_slice());
    let traj = integrate_ode_projected(
        |t, y, dy| {
            geodesic_rhs(chart, d, t, &y[..gl], &mut dy[..gl])?;
            let p = unpack(t, n, d, &y[..gl]);
            let r = Riemann::from_jet(&chart.jet(p.x.as_slice()).map_err(|_| Error::LeftChartDomain { t })?)?;
            let rm = r.operator_in_frame(&p.v, &p.frame);
            let a = DMatrix::from_column_slice(d, d, &y[gl..gl + d * d]);
            dy[gl..gl + d * d].copy_from_slice(&y[gl + d * d..]);
            let acc = -(rm * a);
            dy[gl + d * d..].copy_from_slice(acc.as_slice());
            Ok(())
        },
        &y0,
        (0.0, t_max),
        tol,
        |_, y| {
            if let Ok(g) = chart.metric_at(&y[..n]) {
                orthonormalize_state(&g, n, d, &mut y[..gl]);
            }
        },
    )?;
    Ok(JacobiEvolution { family: family.clone(), traj })
}

impl JacobiEvolution {
    pub fn family(&self) -> &LagrangianFamily {
        &self.family
    }

    pub fn t_max(&self) -> f64 {
        self.traj.t_end()
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    fn dims(&self) -> (usize, usize, usize) {
        let n = self.family.chart.dim();
        (n, n - 1, geo_len(n))
    }

    fn split(&self, t: f64, y: &[f64]) -> JacobiPoint {
        let (n, d, gl) = self.dims();
        JacobiPoint {
            geodesic: unpack(t, n, d, &y[..gl]),
            a: DMatrix::from_column_slice(d, d, &y[gl..gl + d * d]),
            a_prime: DMatrix::from_column_slice(d, d, &y[gl + d * d..]),
        }
    }

    pub fn at(&self, t: f64) -> Result<JacobiPoint> {
        let y = self.traj.eval(t).ok_or(Error::InvalidSpan { start: 0.0, end: self.t_max() })?;
        Ok(self.split(t, &y))
    }

    /// State at the integrator's accepted steps.
    pub fn nodes(&self) -> impl Iterator<Item = JacobiPoint> + '_ {
        self.traj.times().iter().zip(self.traj.states()).map(|(t, y)| self.split(*t, y))
    }

    pub fn a(&self, t: f64) -> Result<DMatrix<f64>> {
        Ok(self.at(t)?.a)
    }

    pub fn det(&self, t: f64) -> Result<f64> {
        Ok(self.a(t)?.determinant())
    }

    /// Singular values of `A(t)`, descending.
    pub fn singular_values(&self, t: f64) -> Result<DVector<f64>> {
        Ok(singular_values(&self.a(t)?))
    }

    /// Directional curvature operator `R(t)` in the parallel frame.
    pub fn curvature(&self, t: f64) -> Result<DMatrix<f64>> {
        let p = self.at(t)?;
        curvature_in_frame(&self.family.chart, &p.geodesic)
    }

    /// `‖(A'ᵀA − AᵀA') − (A0'ᵀA0 − A0ᵀA0')‖` at `t`, divided by `1 + ‖A‖‖A'‖`.
    pub fn wronskian_defect(&self, t: f64) -> Result<f64> {
        let p = self.at(t)?;
        Ok(self.wronskian_of(&p))
    }

    fn wronskian_of(&self, p: &JacobiPoint) -> f64 {
        let f = &self.family;
        let w0 = f.a0_prime.transpose() * &f.a0 - f.a0.transpose() * &f.a0_prime;
        let w = p.a_prime.transpose() * &p.a - p.a.transpose() * &p.a_prime;
        (w - w0).norm() / (1.0 + p.a.norm() * p.a_prime.norm())
    }

    /// Largest scaled Wronskian defect over the nodes and `extra` uniform samples.
    pub fn max_wronskian_defect(&self, extra: usize) -> f64 {
        let mut worst: f64 = self.nodes().map(|p| self.wronskian_of(&p)).fold(0.0, f64::max);
        let t_max = self.t_max();
        for i in 0..=extra {
            let t = t_max * i as f64 / extra.max(1) as f64;
            if let Ok(p) = self.at(t) {
                worst = worst.max(self.wronskian_of(&p));
            }
        }
        worst
    }

    /// `S(t) = A'(t) A(t)⁻¹`, symmetrized.
    pub fn riccati(&self, t: f64) -> Result<RiccatiValue> {
        let p = self.at(t)?;
        let sigma = singular_values(&p.a);
        if sigma[sigma.len() - 1] <= DEFAULT_DET_TOL * sigma[0].max(1.0) {
            return Err(Error::SingularAtT { t });
        }
        let inv = p.a.clone().try_inverse().ok_or(Error::SingularAtT { t })?;
        let s = &p.a_prime * inv;
        Ok(RiccatiValue { asymmetry: asymmetry(&s), s: symmetrize(&s) })
    }

    /// Sum of the `k` smallest eigenvalues of `S(t)`.
    pub fn min_trace_k(&self, t: f64, k: usize) -> Result<f64> {
        let d = self.dims().1;
        if k == 0 || k > d {
            return Err(Error::KOutOfRange { k, max: d });
        }
        let s = self.riccati(t)?.s;
        Ok(sym_eigen(&s)?.sum_smallest(k))
    }
}

#[cfg(test)]
mod tests;
