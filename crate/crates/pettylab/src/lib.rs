//! pettylab — a desk-scale numerical laboratory for higher-order Lp
//! projection and centroid bodies on matrix spaces M[n,m] (n ≤ 3, m ≤ 2).
//!
//! The library builds the operators (projection bodies, centroid bodies,
//! polar bodies, operator-norm balls), the measures behind them (Lp surface
//! area, mixed and dual mixed volumes, sphere quadrature), symmetrization
//! machinery, and a verification harness that checks the corresponding
//! affine isoperimetric inequalities and identities numerically, with
//! seeded, reproducible randomness and per-estimate standard errors.
//!
//! Everything geometric is generic over the scalar type via [`scalar::Real`];
//! the concrete aliases below fix `f64`, which is what the harness and all
//! stated tolerances assume.

pub mod bodies;
pub mod error;
pub mod geom;
pub mod harness;
pub mod hull;
pub mod lp;
pub mod measure;
pub mod operators;
pub mod projfind;
pub mod symmetrize;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod sobolev;
pub mod tol;

pub use bodies::{Body, BodyJson};
pub use error::{Error, Result};
pub use geom::{MatShape, SmallMat};
pub use quadrature::{Estimate, SphereQuadrature};
pub use scalar::Real;
pub use tol::Tol;

/// Concrete f64 aliases (the harness operates on these).
pub type Body64 = bodies::Body<f64>;
pub type Tol64 = tol::Tol<f64>;
pub type SmallMat64 = geom::SmallMat<f64>;

/// f32 aliases exist to demonstrate the scalar abstraction; the stated
/// tolerances are f64-only.
pub type Body32 = bodies::Body<f32>;
