//! Self-contained numeric kernel shared by the geometry layers.

pub mod linalg;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use linalg::{orthonormalize, singular_values, sym_eigen, SymEigen};
pub use ode::{integrate_ode, integrate_ode_projected, Tolerances, Trajectory};
pub use roots::{bracketed_root, golden_min};
