//! Numerical comparison geometry on user-defined Riemannian charts.
//!
//! The crate is layered bottom-up:
//!
//! - [`numerics`]: adaptive Runge–Kutta integration with dense output,
//!   cyclic Jacobi eigen-decomposition, Gram–Schmidt and bracketed roots.
//! - [`manifold`]: charts with metric callbacks, Christoffel symbols, the
//!   curvature tensor, sectional and intermediate Ricci curvature, framed
//!   geodesics and parallel transport.
//! - [`submanifold`]: embedded submanifolds, the tangent/normal splitting,
//!   shape operators and second-fundamental-form norms.
//! - [`jacobi`]: matrix Jacobi systems for Lagrangian families along framed
//!   geodesics, Riccati operators and focal-point detection.
//! - [`comparison`]: constant-curvature model functions and the inequality
//!   verifiers (Riccati trace comparison, shape bound, focal radius at most
//!   pi/2, infinite-focal-radius rigidity, tube volume, conjugate radius).
//! - [`scenarios`]: a catalog of closed-form test geometries.
//! - [`cli`]: the command-line front end used by the `focallab` binary.

pub mod cli;
pub mod comparison;
pub mod error;
pub mod jacobi;
pub mod manifold;
pub mod numerics;
pub mod report;
pub mod scenarios;
pub mod submanifold;

pub use error::{Error, Result};

/// Run `f` over `items` on up to `jobs` threads, returning results in input order.
pub(crate) fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().enumerate().map(|(i, x)| f(i, x)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()),
        Err(_) => items.iter().enumerate().map(|(i, x)| f(i, x)).collect(),
    }
}
