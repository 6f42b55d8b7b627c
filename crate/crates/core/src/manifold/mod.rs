//! Chart-based Riemannian manifolds.

pub mod chart;
pub mod charts;
pub mod curvature;
pub mod geodesic;

pub use chart::{Chart, DerivativeScheme, MetricJet};
pub use curvature::{
    christoffel, directional_curvature_operator, ric_k, riemann, sectional_curvature, Christoffel,
    CurvatureHypothesis, DirectionalCurvature, Kappa, Riemann,
};
pub use geodesic::{geodesic, geodesic_with_frame, parallel_transport, FramePoint, FramedGeodesic};
