//! Model functions and verifiers for the comparison inequalities.

mod conjugate;
pub mod model;
mod soul;
mod tube;
mod verify;

pub use conjugate::{base_conjugate_radius, unit_directions, ConjugateRadius};
pub use model::{ct_kappa, cs_kappa, model_jacobi, riccati_model, sn_kappa, RiccatiModel};
pub use soul::{soul_checks, SoulOptions};
pub use tube::{tube_volume, TubeQuadrature, TubeVolume};
pub use verify::{
    verify_comparison_lemma, verify_focal_pi_over_2, verify_jacobi_model, verify_shape_bound, verify_wronskian,
    LemmaOptions, FOCAL_PI2_WINDOW,
};

use crate::error::{Error, Result};
use crate::jacobi::JacobiEvolution;
use crate::manifold::CurvatureHypothesis;
use crate::numerics::sym_eigen;

/// Allowed shortfall of sampled `Ric_k` below `k·κ` before a verifier refuses to run.
pub const HYPOTHESIS_TOL: f64 = 1e-6;

/// Smallest `Ric_k(γ'(t))` over `times`, from the curvature operator in the parallel frame.
pub fn sampled_ric_k(ev: &JacobiEvolution, k: usize, times: &[f64]) -> Result<f64> {
    let mut min = f64::INFINITY;
    for &t in times {
        let r = ev.curvature(t)?;
        min = min.min(sym_eigen(&r)?.sum_smallest(k));
    }
    Ok(min)
}

/// `n` uniform times in `[0, t]`.
pub(crate) fn uniform_times(t: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t * i as f64 / n as f64).collect()
}

/// Refuse to verify when sampled curvature violates the hypothesis.
pub(crate) fn require_hypothesis(ev: &JacobiEvolution, hyp: CurvatureHypothesis, times: &[f64]) -> Result<f64> {
    let sampled = sampled_ric_k(ev, hyp.k, times)?;
    if sampled < hyp.bound() - HYPOTHESIS_TOL {
        return Err(Error::HypothesisViolated { k: hyp.k, sampled, bound: hyp.bound() });
    }
    Ok(sampled)
}
