//! Embedded submanifolds `N ⊂ M` given by a parametrization into a chart.

mod shape;

pub use shape::{
    max_partial_trace, min_partial_trace, normal_exp, partial_trace, second_fundamental_form_norm,
    second_fundamental_form_norm_with, shape_operator, shape_operator_raw, SffNorm, SffNormKind, TraceMode,
};

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::manifold::Chart;
use crate::numerics::linalg::{complete_basis, ip, orthonormalize};
use crate::numerics::singular_values;

pub type EmbeddingFn = dyn Fn(&[f64]) -> DVector<f64> + Send + Sync;
pub type JacobianFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
/// Second derivatives `∂_a ∂_b F`, indexed `a * m + b`.
pub type HessianFn = dyn Fn(&[f64]) -> Vec<DVector<f64>> + Send + Sync;

/// Axis-aligned parameter box; periodic coordinates wrap.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub periodic: Vec<bool>,
}

impl ParamDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, periodic: Vec<bool>) -> Self {
        assert!(lower.len() == upper.len() && lower.len() == periodic.len());
        ParamDomain { lower, upper, periodic }
    }

    /// Every coordinate periodic over `[0, period)`.
    pub fn periodic(m: usize, period: f64) -> Self {
        Self::new(vec![0.0; m], vec![period; m], vec![true; m])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u.iter().enumerate().all(|(i, &x)| x.is_finite() && (self.periodic[i] || (x >= self.lower[i] && x <= self.upper[i])))
    }

    pub fn is_closed(&self) -> bool {
        self.periodic.iter().all(|p| *p)
    }

    /// Tensor grid of cell midpoints, `counts[i]` cells along coordinate `i`,
    /// with the cell volume of each point.
    pub fn midpoint_grid(&self, counts: &[usize]) -> Vec<(Vec<f64>, f64)> {
        let m = self.dim();
        assert_eq!(counts.len(), m);
        let mut out = vec![(Vec::with_capacity(m), 1.0)];
        for i in 0..m {
            let h = (self.upper[i] - self.lower[i]) / counts[i] as f64;
            out = out
                .into_iter()
                .flat_map(|(u, w)| {
                    (0..counts[i]).map(move |j| {
                        let mut u = u.clone();
                        u.push(self.lower[i] + (j as f64 + 0.5) * h);
                        (u, w * h)
                    })
                })
                .collect();
        }
        out
    }
}

/// A parametrized embedded submanifold of an ambient chart.
#[derive(Clone)]
pub struct EmbeddedSubmanifold {
    name: String,
    ambient: Chart,
    param_dim: usize,
    domain: ParamDomain,
    embedding: Arc<EmbeddingFn>,
    jacobian: Option<Arc<JacobianFn>>,
    hessian: Option<Arc<HessianFn>>,
}

impl fmt::Debug for EmbeddedSubmanifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmbeddedSubmanifold")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("param_dim", &self.param_dim)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Orthonormal splitting `T_pN ⊕ ν_p(N)` at `p = F(u)`.
#[derive(Debug, Clone)]
pub struct NormalFrame {
    pub u: Vec<f64>,
    pub point: DVector<f64>,
    pub metric: DMatrix<f64>,
    pub tangent: Vec<DVector<f64>>,
    pub normal: Vec<DVector<f64>>,
    /// `tangent[i] = Σ_a coeffs[(a, i)] ∂_a F`.
    pub coeffs: DMatrix<f64>,
}

impl NormalFrame {
    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        ip(&self.metric, a, b)
    }

    /// Largest tangential component `|⟨v, e_i⟩|`.
    pub fn tangential_part(&self, v: &DVector<f64>) -> f64 {
        self.tangent.iter().map(|e| self.inner(e, v).abs()).fold(0.0, f64::max)
    }

    /// Unit normal with the given coefficients in the normal basis.
    pub fn normal_from(&self, coeffs: &[f64]) -> DVector<f64> {
        let mut v = DVector::zeros(self.point.len());
        for (c, n) in coeffs.iter().zip(&self.normal) {
            v.axpy(*c, n, 1.0);
        }
        let len = self.inner(&v, &v).sqrt();
        v / len
    }

    /// Orthonormal basis of `v^⊥` ordered as (tangent basis, normals ⊥ v).
    pub fn adapted_frame(&self, v: &DVector<f64>) -> Vec<DVector<f64>> {
        let mut candidates = vec![v.clone()];
        candidates.extend(self.normal.iter().cloned());
        let mut frame = self.tangent.clone();
        frame.extend(gram_schmidt_first(&candidates, &self.metric).into_iter().skip(1));
        frame
    }
}

/// Gram–Schmidt keeping the first vector and discarding dependent ones.
fn gram_schmidt_first(vectors: &[DVector<f64>], g: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = ip(g, b, &w);
                w.axpy(-c, b, 1.0);
            }
        }
        let len = ip(g, &w, &w).max(0.0).sqrt();
        if len > 1e-6 * ip(g, v, v).sqrt() {
            basis.push(w / len);
        }
    }
    basis
}

impl EmbeddedSubmanifold {
    /// Submanifold from an embedding callback; derivatives by central differences.
    pub fn new<F>(name: impl Into<String>, ambient: Chart, domain: ParamDomain, embedding: F) -> Self
    where
        F: Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    {
        let m = domain.dim();
        assert!(m >= 1 && m < ambient.dim(), "need 1 <= dim N < dim M");
        EmbeddedSubmanifold {
            name: name.into(),
            ambient,
            param_dim: m,
            domain,
            embedding: Arc::new(embedding),
            jacobian: None,
            hessian: None,
        }
    }

    /// Supply analytic first and second derivatives of the embedding.
    pub fn with_derivatives<J, H>(mut self, jacobian: J, hessian: H) -> Self
    where
        J: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
        H: Fn(&[f64]) -> Vec<DVector<f64>> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jacobian));
        self.hessian = Some(Arc::new(hessian));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Chart {
        &self.ambient
    }

    pub fn param_dim(&self) -> usize {
        self.param_dim
    }

    pub fn codim(&self) -> usize {
        self.ambient.dim() - self.param_dim
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.param_dim {
            return Err(Error::DimensionMismatch { expected: self.param_dim, got: u.len() });
        }
        if !self.domain.contains(u) {
            return Err(Error::InvalidInput(format!("parameter {u:?} outside the parameter domain")));
        }
        Ok(())
    }

    pub fn point(&self, u: &[f64]) -> Result<DVector<f64>> {
        self.check(u)?;
        Ok((self.embedding)(u))
    }

    /// `n × m` Jacobian `dF(u)`.
    pub fn jacobian(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        self.check(u)?;
        if let Some(j) = &self.jacobian {
            return Ok(j(u));
        }
        let n = self.ambient.dim();
        let h = 1e-5 * (1.0 + norm(u));
        let mut out = DMatrix::zeros(n, self.param_dim);
        let mut up = u.to_vec();
        for a in 0..self.param_dim {
            up[a] = u[a] + h;
            let fp = (self.embedding)(&up);
            up[a] = u[a] - h;
            let fm = (self.embedding)(&up);
            up[a] = u[a];
            out.set_column(a, &((fp - fm) / (2.0 * h)));
        }
        Ok(out)
    }

    /// Second derivatives `∂_a ∂_b F`, indexed `a * m + b`.
    pub fn hessian(&self, u: &[f64]) -> Result<Vec<DVector<f64>>> {
        self.check(u)?;
        if let Some(hf) = &self.hessian {
            return Ok(hf(u));
        }
        let m = self.param_dim;
        let h = 1e-4 * (1.0 + norm(u));
        let f0 = (self.embedding)(u);
        let mut out = vec![DVector::zeros(f0.len()); m * m];
        let mut up = u.to_vec();
        for a in 0..m {
            up[a] = u[a] + h;
            let fp = (self.embedding)(&up);
            up[a] = u[a] - h;
            let fm = (self.embedding)(&up);
            up[a] = u[a];
            out[a * m + a] = (fp - &f0 * 2.0 + fm) / (h * h);
            for b in a + 1..m {
                let mut eval = |sa: f64, sb: f64| {
                    up[a] = u[a] + sa * h;
                    up[b] = u[b] + sb * h;
                    let f = (self.embedding)(&up);
                    up[a] = u[a];
                    up[b] = u[b];
                    f
                };
                let d = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h * h);
                out[a * m + b] = d.clone();
                out[b * m + a] = d;
            }
        }
        Ok(out)
    }

    /// Orthonormal tangent and normal bases at `F(u)`.
    pub fn tangent_normal_split(&self, u: &[f64]) -> Result<NormalFrame> {
        let point = self.point(u)?;
        let metric = self.ambient.metric_at(point.as_slice())?;
        let jac = self.jacobian(u)?;
        let sigma = singular_values(&jac);
        let smin = sigma[sigma.len() - 1];
        if !(smin > 1e-10) {
            return Err(Error::RankDeficientEmbedding { sigma: smin });
        }
        let columns: Vec<DVector<f64>> = (0..self.param_dim).map(|a| jac.column(a).into_owned()).collect();
        let tangent = orthonormalize(&columns, &metric).map_err(|_| Error::RankDeficientEmbedding { sigma: smin })?;
        // tangent = jac * coeffs; solve by least squares on the full-rank jac
        let tmat = DMatrix::from_columns(&tangent);
        let coeffs = jac
            .clone()
            .svd(true, true)
            .solve(&tmat, 1e-14)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let normal = complete_basis(&tangent, &metric).split_off(self.param_dim);
        Ok(NormalFrame { u: u.to_vec(), point, metric, tangent, normal, coeffs })
    }

    /// Chart on the parameter domain with the induced metric `dFᵀ g dF`.
    pub fn induced_chart(&self) -> Chart {
        let sub = self.clone();
        let m = self.param_dim;
        let domain = self.domain.clone();
        Chart::new(format!("{}:induced", self.name), m, move |u| {
            let x = (sub.embedding)(u);
            let j = sub.jacobian(u).unwrap_or_else(|_| DMatrix::from_element(x.len(), u.len(), f64::NAN));
            let g = sub.ambient.metric_raw(x.as_slice());
            j.transpose() * g * j
        })
        .with_domain(move |u| domain.contains(u))
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests;
