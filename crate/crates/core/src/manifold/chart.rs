use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Metric tensor and its first and second coordinate derivatives at a point.
///
/// `dg[a]` is `∂_a g` and `ddg[a * n + b]` is `∂_a ∂_b g`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub ddg: Vec<DMatrix<f64>>,
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn second(&self, a: usize, b: usize) -> &DMatrix<f64> {
        &self.ddg[a * self.dim() + b]
    }

    /// Jet of a conformally flat metric `φ(x) δ` from `φ`, `∇φ` and the Hessian of `φ`.
    pub fn conformal(phi: f64, grad: &[f64], hess: &DMatrix<f64>) -> Self {
        let n = grad.len();
        let eye = DMatrix::<f64>::identity(n, n);
        MetricJet {
            g: &eye * phi,
            dg: grad.iter().map(|d| &eye * *d).collect(),
            ddg: (0..n * n).map(|ab| &eye * hess[(ab / n, ab % n)]).collect(),
        }
    }
}

pub type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
pub type JetFn = dyn Fn(&[f64]) -> MetricJet + Send + Sync;
pub type DomainFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// How metric derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeScheme {
    /// Use the chart's analytic jet callback.
    Analytic,
    /// Central differences; steps are scaled by `1 + ‖x‖`.
    CentralDifference { first_step: f64, second_step: f64 },
}

impl DerivativeScheme {
    pub const DEFAULT_FD: DerivativeScheme = DerivativeScheme::CentralDifference { first_step: 1e-5, second_step: 1e-4 };
}

/// A single coordinate patch with a smooth metric.
///
/// Charts are cheap to clone and immutable; callbacks must be deterministic.
#[derive(Clone)]
pub struct Chart {
    name: String,
    dim: usize,
    metric: Arc<MetricFn>,
    jet: Option<Arc<JetFn>>,
    domain: Option<Arc<DomainFn>>,
    scheme: DerivativeScheme,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("scheme", &self.scheme)
            .finish()
    }
}

impl Chart {
    /// Chart with a metric callback; derivatives by central differences.
    pub fn new<F>(name: impl Into<String>, dim: usize, metric: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        assert!(dim >= 2, "charts need dimension at least 2");
        Chart {
            name: name.into(),
            dim,
            metric: Arc::new(metric),
            jet: None,
            domain: None,
            scheme: DerivativeScheme::DEFAULT_FD,
        }
    }

    /// Attach an analytic jet and switch to the analytic scheme.
    pub fn with_analytic_jet<F>(mut self, jet: F) -> Self
    where
        F: Fn(&[f64]) -> MetricJet + Send + Sync + 'static,
    {
        self.jet = Some(Arc::new(jet));
        self.scheme = DerivativeScheme::Analytic;
        self
    }

    pub fn with_domain<F>(mut self, inside: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Arc::new(inside));
        self
    }

    /// Override the derivative scheme. Selecting `Analytic` without a jet
    /// callback falls back to central differences.
    pub fn with_scheme(mut self, scheme: DerivativeScheme) -> Self {
        self.scheme = match (scheme, &self.jet) {
            (DerivativeScheme::Analytic, None) => DerivativeScheme::DEFAULT_FD,
            (s, _) => s,
        };
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scheme(&self) -> DerivativeScheme {
        self.scheme
    }

    pub fn has_analytic_jet(&self) -> bool {
        self.jet.is_some()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && x.iter().all(|v| v.is_finite()) && self.domain.as_ref().is_none_or(|d| d(x))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !self.contains(x) {
            return Err(Error::OutsideChart { point: x.to_vec() });
        }
        Ok(())
    }

    /// Raw metric callback without checks.
    pub fn metric_raw(&self, x: &[f64]) -> DMatrix<f64> {
        (self.metric)(x)
    }

    /// Metric at `x`, checked for domain membership and positive definiteness.
    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let g = (self.metric)(x);
        check_pd(x, &g)?;
        Ok(g)
    }

    /// Metric with first derivatives only (second-derivative slots empty).
    pub fn first_jet(&self, x: &[f64]) -> Result<MetricJet> {
        match self.scheme {
            DerivativeScheme::Analytic => self.jet(x),
            DerivativeScheme::CentralDifference { first_step, .. } => {
                let g = self.metric_at(x)?;
                let h = first_step * (1.0 + norm(x));
                Ok(MetricJet { g, dg: self.fd_first(x, h), ddg: Vec::new() })
            }
        }
    }

    /// Metric with first and second derivatives.
    pub fn jet(&self, x: &[f64]) -> Result<MetricJet> {
        match (self.scheme, &self.jet) {
            (DerivativeScheme::Analytic, Some(jet)) => {
                self.check_point(x)?;
                let j = jet(x);
                check_pd(x, &j.g)?;
                Ok(j)
            }
            (DerivativeScheme::CentralDifference { first_step, second_step }, _) => {
                let g = self.metric_at(x)?;
                let h1 = first_step * (1.0 + norm(x));
                let h2 = second_step * (1.0 + norm(x));
                let dg = self.fd_first(x, h1);
                let ddg = self.fd_second(x, &g, h2);
                Ok(MetricJet { g, dg, ddg })
            }
            (DerivativeScheme::Analytic, None) => unreachable!("analytic scheme requires a jet"),
        }
    }

    fn fd_first(&self, x: &[f64], h: f64) -> Vec<DMatrix<f64>> {
        let mut xp = x.to_vec();
        (0..self.dim)
            .map(|a| {
                xp[a] = x[a] + h;
                let gp = (self.metric)(&xp);
                xp[a] = x[a] - h;
                let gm = (self.metric)(&xp);
                xp[a] = x[a];
                (gp - gm) / (2.0 * h)
            })
            .collect()
    }

    fn fd_second(&self, x: &[f64], g0: &DMatrix<f64>, h: f64) -> Vec<DMatrix<f64>> {
        let n = self.dim;
        let mut out = vec![DMatrix::zeros(n, n); n * n];
        let mut xp = x.to_vec();
        for a in 0..n {
            xp[a] = x[a] + h;
            let gp = (self.metric)(&xp);
            xp[a] = x[a] - h;
            let gm = (self.metric)(&xp);
            xp[a] = x[a];
            out[a * n + a] = (gp - g0 * 2.0 + gm) / (h * h);
            for b in a + 1..n {
                let mut eval = |sa: f64, sb: f64| {
                    xp[a] = x[a] + sa * h;
                    xp[b] = x[b] + sb * h;
                    let g = (self.metric)(&xp);
                    xp[a] = x[a];
                    xp[b] = x[b];
                    g
                };
                let m = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h * h);
                out[a * n + b] = m.clone();
                out[b * n + a] = m;
            }
        }
        out
    }

    /// `⟨u, w⟩_g` at `x`.
    pub fn inner(&self, x: &[f64], u: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        let g = self.metric_at(x)?;
        Ok(crate::numerics::linalg::ip(&g, u, w))
    }

    /// Rescale `v` to unit length under the metric at `x`.
    pub fn normalize(&self, x: &[f64], v: &DVector<f64>) -> Result<DVector<f64>> {
        let len = self.inner(x, v, v)?.sqrt();
        if !(len > 0.0) {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        Ok(v / len)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn check_pd(x: &[f64], g: &DMatrix<f64>) -> Result<()> {
    let n = g.nrows();
    let fail = |min_eigenvalue| Error::MetricNotPD { point: x.to_vec(), min_eigenvalue };
    if g.ncols() != n || g.iter().any(|v| !v.is_finite()) {
        return Err(fail(f64::NAN));
    }
    // Cholesky pivots bound the smallest eigenvalue from above; fall back to
    // the eigen-decomposition only when a pivot is suspicious.
    match g.clone().cholesky() {
        Some(ch) => {
            let l = ch.l();
            let min_pivot = (0..n).map(|i| l[(i, i)] * l[(i, i)]).fold(f64::INFINITY, f64::min);
            if min_pivot > 1e-8 {
                return Ok(());
            }
            let eig = crate::numerics::sym_eigen(&crate::numerics::linalg::symmetrize(g)).map_err(|_| fail(f64::NAN))?;
            if eig.min() > 1e-12 {
                Ok(())
            } else {
                Err(fail(eig.min()))
            }
        }
        None => {
            let min = crate::numerics::sym_eigen(&crate::numerics::linalg::symmetrize(g)).map(|e| e.min()).unwrap_or(f64::NAN);
            Err(fail(min))
        }
    }
}
