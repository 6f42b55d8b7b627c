//! Levi-Civita connection and curvature from a metric jet.
//!
//! Curvature convention: `R(X, Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`, so
//! that `sec(u, w) = ⟨R(u, w)w, u⟩ / |u ∧ w|²` and the Jacobi equation reads
//! `J'' + R(J, γ')γ' = 0`.

use nalgebra::{DMatrix, DVector};

use super::chart::{Chart, MetricJet};
use crate::error::{Error, Result};
use crate::numerics::linalg::{complete_basis, ip, symmetrize};
use crate::numerics::sym_eigen;

/// Lower curvature bound `κ` of a comparison hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kappa {
    MinusOne,
    Zero,
    One,
}

impl Kappa {
    pub fn value(self) -> f64 {
        match self {
            Kappa::MinusOne => -1.0,
            Kappa::Zero => 0.0,
            Kappa::One => 1.0,
        }
    }

    pub fn from_i32(k: i32) -> Option<Self> {
        match k {
            -1 => Some(Kappa::MinusOne),
            0 => Some(Kappa::Zero),
            1 => Some(Kappa::One),
            _ => None,
        }
    }

    pub fn as_i32(self) -> i32 {
        self.value() as i32
    }
}

/// `Ric_k ≥ k·κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvatureHypothesis {
    pub kappa: Kappa,
    pub k: usize,
}

impl CurvatureHypothesis {
    pub fn new(kappa: Kappa, k: usize) -> Self {
        Self { kappa, k }
    }

    /// The bound `k·κ` on `Ric_k`.
    pub fn bound(&self) -> f64 {
        self.k as f64 * self.kappa.value()
    }

    /// Check `1 ≤ k ≤ n − 1` for an ambient dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k + 1 > n {
            return Err(Error::KOutOfRange { k: self.k, max: n.saturating_sub(1) });
        }
        Ok(())
    }
}

/// Christoffel symbols `Γ^k_{ij}` at a point.
#[derive(Debug, Clone)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Γ^k_{ij}`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    /// `Γ(u, w)^k = Γ^k_{ij} u^i w^j`.
    pub fn contract(&self, u: &[f64], w: &[f64], out: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                if u[i] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    s += self.data[(k * n + i) * n + j] * u[i] * w[j];
                }
            }
            out[k] = s;
        }
    }

    pub fn from_jet(jet: &MetricJet) -> Result<Self> {
        let n = jet.dim();
        let ginv = inverse(&jet.g)?;
        let first = first_kind(jet);
        let mut data = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[(k, l)] * first[(l * n + i) * n + j];
                    }
                    data[(k * n + i) * n + j] = s;
                }
            }
        }
        Ok(Christoffel { n, data })
    }
}

/// Curvature tensor at a point.
#[derive(Debug, Clone)]
pub struct Riemann {
    n: usize,
    g: DMatrix<f64>,
    // lower[((i*n + j)*n + k)*n + l] = ⟨R(∂_i, ∂_j)∂_k, ∂_l⟩
    lower: Vec<f64>,
}

impl Riemann {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// `⟨R(∂_i, ∂_j)∂_k, ∂_l⟩`.
    pub fn lower(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.lower[((i * n + j) * n + k) * n + l]
    }

    /// `⟨R(x, y)z, w⟩`.
    pub fn form(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        s += self.lower(i, j, k, l) * xy * z[k] * w[l];
                    }
                }
            }
        }
        s
    }

    /// Coordinate matrix `K_{il} = ⟨R(∂_i, v)v, ∂_l⟩` of the Jacobi operator along `v`.
    pub fn jacobi_form(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        let mut k_mat = DMatrix::zeros(n, n);
        for i in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        s += self.lower(i, j, k, l) * v[j] * v[k];
                    }
                }
                k_mat[(i, l)] = s;
            }
        }
        k_mat
    }

    /// Matrix `⟨R(E_i, v)v, E_j⟩` in the given frame.
    pub fn operator_in_frame(&self, v: &DVector<f64>, frame: &[DVector<f64>]) -> DMatrix<f64> {
        let k_mat = self.jacobi_form(v);
        let m = frame.len();
        let mut out = DMatrix::zeros(m, m);
        for a in 0..m {
            let ka = k_mat.transpose() * &frame[a];
            for b in 0..m {
                out[(a, b)] = ka.dot(&frame[b]);
            }
        }
        out
    }

    pub fn from_jet(jet: &MetricJet) -> Result<Self> {
        let n = jet.dim();
        if jet.ddg.len() != n * n {
            return Err(Error::InvalidInput("curvature needs second metric derivatives".into()));
        }
        let ginv = inverse(&jet.g)?;
        let first = first_kind(jet);
        let idx3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        // Γ^p_{jk}
        let mut gamma = vec![0.0; n * n * n];
        for p in 0..n {
            for j in 0..n {
                for k in 0..n {
                    gamma[idx3(p, j, k)] = (0..n).map(|m| ginv[(p, m)] * first[idx3(m, j, k)]).sum();
                }
            }
        }
        // ∂_i Γ^p_{jk} = ∂_i g^{pm} Γ_{mjk} + g^{pm} ∂_i Γ_{mjk}
        let mut dgamma = vec![0.0; n * n * n * n];
        for i in 0..n {
            let dginv = -(&ginv * &jet.dg[i] * &ginv);
            for m in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let d_first = 0.5
                            * (jet.second(i, j)[(m, k)] + jet.second(i, k)[(m, j)] - jet.second(i, m)[(j, k)]);
                        let f = first[idx3(m, j, k)];
                        for p in 0..n {
                            dgamma[((i * n + p) * n + j) * n + k] += dginv[(p, m)] * f + ginv[(p, m)] * d_first;
                        }
                    }
                }
            }
        }
        let dg_at = |i: usize, p: usize, j: usize, k: usize| dgamma[((i * n + p) * n + j) * n + k];
        // R^p_{ijk} then lower with g_{lp}
        let mut upper = vec![0.0; n * n * n * n];
        for p in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut s = dg_at(i, p, j, k) - dg_at(j, p, i, k);
                        for q in 0..n {
                            s += gamma[idx3(p, i, q)] * gamma[idx3(q, j, k)] - gamma[idx3(p, j, q)] * gamma[idx3(q, i, k)];
                        }
                        upper[((p * n + i) * n + j) * n + k] = s;
                    }
                }
            }
        }
        let mut lower = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        lower[((i * n + j) * n + k) * n + l] =
                            (0..n).map(|p| jet.g[(l, p)] * upper[((p * n + i) * n + j) * n + k]).sum();
                    }
                }
            }
        }
        Ok(Riemann { n, g: jet.g.clone(), lower })
    }
}

fn inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    g.clone()
        .cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| Error::MetricNotPD { point: Vec::new(), min_eigenvalue: f64::NAN })
}

/// Christoffel symbols of the first kind `Γ_{mjk} = ½(∂_j g_{mk} + ∂_k g_{mj} − ∂_m g_{jk})`.
fn first_kind(jet: &MetricJet) -> Vec<f64> {
    let n = jet.dim();
    let mut out = vec![0.0; n * n * n];
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[(m * n + j) * n + k] = 0.5 * (jet.dg[j][(m, k)] + jet.dg[k][(m, j)] - jet.dg[m][(j, k)]);
            }
        }
    }
    out
}

pub fn christoffel(chart: &Chart, x: &[f64]) -> Result<Christoffel> {
    Christoffel::from_jet(&chart.first_jet(x)?)
}

pub fn riemann(chart: &Chart, x: &[f64]) -> Result<Riemann> {
    Riemann::from_jet(&chart.jet(x)?)
}

/// Sectional curvature of the plane spanned by `u` and `w` at `x`.
pub fn sectional_curvature(chart: &Chart, x: &[f64], u: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
    let r = riemann(chart, x)?;
    sectional_from(&r, u, w)
}

pub(crate) fn sectional_from(r: &Riemann, u: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
    let g = r.metric();
    let uu = ip(g, u, u);
    let ww = ip(g, w, w);
    let uw = ip(g, u, w);
    let area = uu * ww - uw * uw;
    if area < 1e-12 * (uu * ww).max(1e-300) || area < 1e-24 {
        return Err(Error::DegeneratePlane { area });
    }
    Ok(r.form(u, w, w, u) / area)
}

/// Curvature operator `R(·, v)v` restricted to `v^⊥`, in an orthonormal basis.
#[derive(Debug, Clone)]
pub struct DirectionalCurvature {
    /// Orthonormal basis of `v^⊥` (coordinate vectors).
    pub basis: Vec<DVector<f64>>,
    /// Symmetric `(n−1)×(n−1)` matrix `⟨R(E_i, v)v, E_j⟩`.
    pub matrix: DMatrix<f64>,
}

pub fn directional_curvature_operator(chart: &Chart, x: &[f64], v: &DVector<f64>) -> Result<DirectionalCurvature> {
    let r = riemann(chart, x)?;
    let g = r.metric().clone();
    let len = ip(&g, v, v).sqrt();
    if !(len > 0.0) {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    let unit = v / len;
    let mut basis = complete_basis(std::slice::from_ref(&unit), &g);
    basis.remove(0);
    let matrix = symmetrize(&r.operator_in_frame(&unit, &basis));
    Ok(DirectionalCurvature { basis, matrix })
}

/// Intermediate Ricci curvature: sum of the `k` smallest eigenvalues of the
/// directional curvature operator (equivalently the minimum of
/// `Σ sec(v, E_i)` over orthonormal `k`-sets in `v^⊥`).
pub fn ric_k(chart: &Chart, x: &[f64], v: &DVector<f64>, k: usize) -> Result<f64> {
    let n = chart.dim();
    if k == 0 || k > n - 1 {
        return Err(Error::KOutOfRange { k, max: n - 1 });
    }
    let op = directional_curvature_operator(chart, x, v)?;
    Ok(sym_eigen(&op.matrix)?.sum_smallest(k))
}
