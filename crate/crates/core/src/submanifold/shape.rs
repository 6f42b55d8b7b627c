use nalgebra::{DMatrix, DVector};

use super::{EmbeddedSubmanifold, NormalFrame};
use crate::error::{Error, Result};
use crate::manifold::{geodesic_with_frame, FramedGeodesic};
use crate::manifold::curvature::Christoffel;
use crate::numerics::linalg::{asymmetry, symmetrize};
use crate::numerics::quadrature::sphere_design;
use crate::numerics::{sym_eigen, Tolerances};

fn check_normal(frame: &NormalFrame, v: &DVector<f64>) -> Result<()> {
    if v.len() != frame.point.len() {
        return Err(Error::DimensionMismatch { expected: frame.point.len(), got: v.len() });
    }
    let tangential = frame.tangential_part(v);
    if tangential > 1e-8 {
        return Err(Error::NotNormal { tangential });
    }
    let len = frame.inner(v, v).sqrt();
    if (len - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!("normal vector must be unit, has length {len}")));
    }
    Ok(())
}

/// Second fundamental form components `⟨∇_{∂_a F} ∂_b F, ·⟩` as ambient vectors,
/// already expressed in the orthonormal tangent basis: entry `i * m + j` is
/// `∇_{e_i} e_j` (its normal part is `II(e_i, e_j)`).
fn covariant_hessian(sub: &EmbeddedSubmanifold, frame: &NormalFrame) -> Result<Vec<DVector<f64>>> {
    let m = sub.param_dim();
    let n = sub.ambient().dim();
    let jac = sub.jacobian(&frame.u)?;
    let hess = sub.hessian(&frame.u)?;
    let gamma = Christoffel::from_jet(&sub.ambient().first_jet(frame.point.as_slice())?)?;
    let mut cov = Vec::with_capacity(m * m);
    let mut buf = vec![0.0; n];
    for a in 0..m {
        for b in 0..m {
            let fa = jac.column(a).into_owned();
            let fb = jac.column(b).into_owned();
            gamma.contract(fa.as_slice(), fb.as_slice(), &mut buf);
            cov.push(&hess[a * m + b] + DVector::from_column_slice(&buf));
        }
    }
    let c = &frame.coeffs;
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = DVector::zeros(n);
            for a in 0..m {
                for b in 0..m {
                    acc.axpy(c[(a, i)] * c[(b, j)], &cov[a * m + b], 1.0);
                }
            }
            out.push(acc);
        }
    }
    Ok(out)
}

fn shape_from(frame: &NormalFrame, cov: &[DVector<f64>], v: &DVector<f64>) -> DMatrix<f64> {
    let m = frame.tangent.len();
    DMatrix::from_fn(m, m, |i, j| frame.inner(&cov[i * m + j], v))
}

/// Shape operator `S_v` with entries `⟨∇_{e_i} e_j, v⟩` in the orthonormal
/// tangent basis of [`EmbeddedSubmanifold::tangent_normal_split`], before
/// symmetrization. Returns the frame and the matrix.
///
/// With this sign the sphere of radius `ρ` in Euclidean space has
/// `S_v = I/ρ` for the inward normal.
pub fn shape_operator_raw(sub: &EmbeddedSubmanifold, u: &[f64], v: &DVector<f64>) -> Result<(NormalFrame, DMatrix<f64>)> {
    let frame = sub.tangent_normal_split(u)?;
    check_normal(&frame, v)?;
    let cov = covariant_hessian(sub, &frame)?;
    let s = shape_from(&frame, &cov, v);
    Ok((frame, s))
}

/// Symmetrized shape operator `S_v`.
pub fn shape_operator(sub: &EmbeddedSubmanifold, u: &[f64], v: &DVector<f64>) -> Result<DMatrix<f64>> {
    let (_, s) = shape_operator_raw(sub, u, v)?;
    Ok(symmetrize(&s))
}

/// Which matrix norm of `S_v` is maximized over unit normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SffNormKind {
    #[default]
    Spectral,
    Frobenius,
}

/// `|II_N|(p)` with the maximizing unit normal.
#[derive(Debug, Clone)]
pub struct SffNorm {
    pub value: f64,
    pub normal: DVector<f64>,
    /// Largest asymmetry `‖S − Sᵀ‖` seen among the normal basis operators.
    pub asymmetry: f64,
}

fn spectral(s: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let e = sym_eigen(s)?;
    let (lo, hi) = (e.values[0], e.values[e.values.len() - 1]);
    Ok(if hi.abs() >= lo.abs() {
        (hi.abs(), e.vectors.column(e.values.len() - 1).into_owned())
    } else {
        (lo.abs(), e.vectors.column(0).into_owned())
    })
}

fn combine(ops: &[DMatrix<f64>], c: &DVector<f64>) -> DMatrix<f64> {
    let m = ops[0].nrows();
    let mut s = DMatrix::zeros(m, m);
    for (a, op) in ops.iter().enumerate() {
        s += op * c[a];
    }
    s
}

/// `max_{|v|=1} ‖S_v‖` (spectral norm).
pub fn second_fundamental_form_norm(sub: &EmbeddedSubmanifold, u: &[f64]) -> Result<f64> {
    Ok(second_fundamental_form_norm_with(sub, u, SffNormKind::Spectral)?.value)
}

/// `|II_N|(p)` for either norm. Codimension one is exact; higher codimension
/// scans a deterministic design of `64·codim` normal directions and refines
/// the best one by alternating maximization over the tangent and normal
/// spheres.
pub fn second_fundamental_form_norm_with(sub: &EmbeddedSubmanifold, u: &[f64], kind: SffNormKind) -> Result<SffNorm> {
    let frame = sub.tangent_normal_split(u)?;
    let cov = covariant_hessian(sub, &frame)?;
    let raw: Vec<DMatrix<f64>> = frame.normal.iter().map(|nu| shape_from(&frame, &cov, nu)).collect();
    let asym = raw.iter().map(asymmetry).fold(0.0, f64::max);
    let ops: Vec<DMatrix<f64>> = raw.iter().map(symmetrize).collect();
    let codim = ops.len();

    let coeffs = match kind {
        SffNormKind::Frobenius => {
            let gram = DMatrix::from_fn(codim, codim, |a, b| (&ops[a] * &ops[b]).trace());
            let e = sym_eigen(&symmetrize(&gram))?;
            let c = e.vectors.column(codim - 1).into_owned();
            let value = e.values[codim - 1].max(0.0).sqrt();
            return Ok(SffNorm { value, normal: frame.normal_from(c.as_slice()), asymmetry: asym });
        }
        SffNormKind::Spectral if codim == 1 => DVector::from_element(1, 1.0),
        SffNormKind::Spectral => {
            let mut best = (f64::NEG_INFINITY, DVector::zeros(codim));
            for (c, _) in sphere_design(codim, 64 * codim) {
                let (val, _) = spectral(&combine(&ops, &c))?;
                if val > best.0 {
                    best = (val, c);
                }
            }
            let (mut value, mut c) = best;
            for _ in 0..200 {
                let (_, x) = spectral(&combine(&ops, &c))?;
                let q = DVector::from_iterator(codim, ops.iter().map(|s| x.dot(&(s * &x))));
                let qn = q.norm();
                if qn == 0.0 {
                    break;
                }
                let next = q / qn;
                let (val, _) = spectral(&combine(&ops, &next))?;
                let gain = val - value;
                if val >= value {
                    value = val;
                    c = next;
                }
                if gain <= 1e-15 * value.max(1.0) {
                    break;
                }
            }
            c
        }
    };
    let (value, _) = spectral(&combine(&ops, &coeffs))?;
    Ok(SffNorm { value, normal: frame.normal_from(coeffs.as_slice()), asymmetry: asym })
}

fn check_k(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        return Err(Error::KOutOfRange { k, max: m });
    }
    Ok(())
}

/// Sum of the `k` smallest eigenvalues of a symmetric matrix.
pub fn min_partial_trace(s: &DMatrix<f64>, k: usize) -> Result<f64> {
    check_k(k, s.nrows())?;
    Ok(sym_eigen(&symmetrize(s))?.sum_smallest(k))
}

/// Sum of the `k` largest eigenvalues of a symmetric matrix.
pub fn max_partial_trace(s: &DMatrix<f64>, k: usize) -> Result<f64> {
    check_k(k, s.nrows())?;
    Ok(sym_eigen(&symmetrize(s))?.sum_largest(k))
}

/// How [`partial_trace`] chooses the `k` tangent directions.
#[derive(Debug, Clone, Copy)]
pub enum TraceMode<'a> {
    Min,
    Max,
    /// Given orthonormal tangent vectors (ambient coordinates).
    Frame(&'a [DVector<f64>]),
}

/// `Σ_{i≤k} ⟨S_v e_i, e_i⟩`.
pub fn partial_trace(sub: &EmbeddedSubmanifold, u: &[f64], v: &DVector<f64>, k: usize, mode: TraceMode<'_>) -> Result<f64> {
    let (frame, s) = shape_operator_raw(sub, u, v)?;
    let s = symmetrize(&s);
    match mode {
        TraceMode::Min => min_partial_trace(&s, k),
        TraceMode::Max => max_partial_trace(&s, k),
        TraceMode::Frame(vectors) => {
            check_k(k, s.nrows())?;
            if vectors.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: vectors.len() });
            }
            let mut total = 0.0;
            for e in vectors {
                let c = DVector::from_iterator(frame.tangent.len(), frame.tangent.iter().map(|t| frame.inner(t, e)));
                total += c.dot(&(&s * &c));
            }
            Ok(total)
        }
    }
}

/// Normal geodesic `t ↦ exp(t v)` from `F(u)` on `[0, t]`, framed by the
/// adapted frame (tangent basis, normals ⊥ v). The point is `geodesic.end().x`.
pub fn normal_exp(sub: &EmbeddedSubmanifold, u: &[f64], v: &DVector<f64>, t: f64) -> Result<FramedGeodesic> {
    let frame = sub.tangent_normal_split(u)?;
    check_normal(&frame, v)?;
    let adapted = frame.adapted_frame(v);
    geodesic_with_frame(sub.ambient(), frame.point.as_slice(), v, &adapted, (0.0, t), Tolerances::default())
}
