//! Central tolerance policy. One record, threaded through geometry entry
//! points; every constant here is a *policy*, not a magic number scattered
//! at call sites.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct Tol<R: Real> {
    /// LP feasibility / pivot tolerance (scaled by data magnitude).
    pub feas: R,
    /// Determinant / rank decisions.
    pub det: R,
    /// Membership slack: `gauge(x) <= 1 + member` counts as inside.
    pub member: R,
    /// Coplanarity when merging hull facets (relative to diameter).
    pub coplanar: R,
    /// Bisection / root-finding resolution (relative to scale).
    pub bisect: R,
    /// Generic "is this zero" guard.
    pub tiny: R,
}

impl<R: Real> Default for Tol<R> {
    fn default() -> Self {
        Tol {
            feas: R::of(1e-9),
            det: R::of(1e-12),
            member: R::of(1e-9),
            coplanar: R::of(1e-10),
            bisect: R::of(1e-12),
            tiny: R::of(1e-14),
        }
    }
}
