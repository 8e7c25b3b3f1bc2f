//! Convex/star bodies in matrix spaces M[n,m], with exact support and gauge
//! evaluation per representation.
//!
//! Conventions:
//! - points are row-major flat slices; the shape lives on the body;
//! - `support(o) = 0`, `gauge` returns `+∞` when x is outside the
//!   representable cone (never an exception);
//! - `Polar` is a first-class wrapper: support and gauge swap through it.

use crate::error::{Error, Result};
use crate::geom::{left_apply, norm, right_apply, MatShape, SmallMat};
use crate::hull;
use crate::lp::{solve_min_eq, LpOutcome};
use crate::scalar::Real;
use crate::tol::Tol;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Named callable used by oracle-backed bodies.
#[derive(Clone)]
pub struct Oracle<R: Real> {
    pub name: String,
    pub f: Arc<dyn Fn(&[R]) -> R + Send + Sync>,
}

impl<R: Real> Oracle<R> {
    pub fn new(name: impl Into<String>, f: impl Fn(&[R]) -> R + Send + Sync + 'static) -> Self {
        Oracle { name: name.into(), f: Arc::new(f) }
    }

    #[inline]
    pub fn eval(&self, x: &[R]) -> R {
        (self.f)(x)
    }
}

impl<R: Real> std::fmt::Debug for Oracle<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Oracle({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Body<R: Real> {
    /// conv(vertices); vertices may include non-extreme points.
    VertexPolytope { shape: MatShape, vertices: Vec<Vec<R>> },
    /// conv{a, b}.
    Segment { shape: MatShape, a: Vec<R>, b: Vec<R> },
    /// Frobenius ball of given radius, centered at o.
    Ball { shape: MatShape, radius: R },
    /// a·B₂^d on the flattened space, `a` invertible d×d.
    EllipsoidImage { shape: MatShape, a: SmallMat<R>, a_inv: SmallMat<R> },
    /// Firey combination: h(x)^p = Σ w_i h_i(x)^p, p ≥ 1.
    LpSum { p: R, terms: Vec<(R, Body<R>)> },
    /// A·G (left action), A ∈ R^{k×n}.
    LeftImage { a: SmallMat<R>, inner: Box<Body<R>> },
    /// G·B (right action), B ∈ R^{m×l}.
    RightImage { b: SmallMat<R>, inner: Box<Body<R>> },
    /// G° — support and gauge swap.
    Polar(Box<Body<R>>),
    /// Body defined by a support function.
    SupportOracle { shape: MatShape, oracle: Oracle<R> },
    /// Star body defined by a gauge; `outer_radius` bounds the body.
    GaugeOracle { shape: MatShape, oracle: Oracle<R>, outer_radius: R },
}

impl<R: Real> Body<R> {
    // ------------------------------------------------------ constructors

    pub fn polytope(shape: MatShape, vertices: Vec<Vec<R>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Degenerate("polytope with no vertices".into()));
        }
        for v in &vertices {
            shape.check_point(v, "polytope vertex")?;
        }
        Ok(Body::VertexPolytope { shape, vertices })
    }

    pub fn segment(shape: MatShape, a: Vec<R>, b: Vec<R>) -> Result<Self> {
        shape.check_point(&a, "segment endpoint")?;
        shape.check_point(&b, "segment endpoint")?;
        Ok(Body::Segment { shape, a, b })
    }

    pub fn ball(shape: MatShape, radius: R) -> Result<Self> {
        if radius <= R::zero() {
            return Err(Error::Parameter("ball radius must be positive".into()));
        }
        Ok(Body::Ball { shape, radius })
    }

    pub fn ellipsoid(shape: MatShape, a: SmallMat<R>) -> Result<Self> {
        let d = shape.dim();
        if a.rows != d || a.cols != d {
            return Err(Error::Parameter(format!(
                "ellipsoid matrix must be {d}x{d} for {shape}"
            )));
        }
        let a_inv = a.inverse()?;
        Ok(Body::EllipsoidImage { shape, a, a_inv })
    }

    pub fn lp_sum(p: R, terms: Vec<(R, Body<R>)>) -> Result<Self> {
        if p < R::one() {
            return Err(Error::Parameter(format!("Lp sum needs p >= 1, got {p}")));
        }
        let Some(first) = terms.first() else {
            return Err(Error::Parameter("Lp sum with no terms".into()));
        };
        let shape = first.1.shape();
        for (w, b) in &terms {
            if *w <= R::zero() {
                return Err(Error::Parameter("Lp sum weights must be positive".into()));
            }
            if b.shape() != shape {
                return Err(Error::ShapeMismatch {
                    expected: shape.to_string(),
                    got: b.shape().to_string(),
                    context: "Lp sum term",
                });
            }
        }
        Ok(Body::LpSum { p, terms })
    }

    pub fn support_oracle(
        shape: MatShape,
        name: impl Into<String>,
        f: impl Fn(&[R]) -> R + Send + Sync + 'static,
    ) -> Self {
        Body::SupportOracle { shape, oracle: Oracle::new(name, f) }
    }

    pub fn gauge_oracle(
        shape: MatShape,
        name: impl Into<String>,
        outer_radius: R,
        f: impl Fn(&[R]) -> R + Send + Sync + 'static,
    ) -> Self {
        Body::GaugeOracle { shape, oracle: Oracle::new(name, f), outer_radius }
    }

    /// Cube [-w, w]^{nm} as a vertex polytope.
    pub fn cube(shape: MatShape, halfwidth: R) -> Result<Self> {
        let d = shape.dim();
        if d > 8 {
            return Err(Error::Parameter("cube vertex list only built for nm <= 8".into()));
        }
        let mut vertices = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            let v: Vec<R> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { halfwidth } else { -halfwidth })
                .collect();
            vertices.push(v);
        }
        Body::polytope(shape, vertices)
    }

    /// Cross polytope conv{±r·e_i}.
    pub fn cross(shape: MatShape, radius: R) -> Result<Self> {
        let d = shape.dim();
        let mut vertices = Vec::with_capacity(2 * d);
        for i in 0..d {
            for sgn in [R::one(), -R::one()] {
                let mut v = vec![R::zero(); d];
                v[i] = sgn * radius;
                vertices.push(v);
            }
        }
        Body::polytope(shape, vertices)
    }

    /// conv{o, e_1, …, e_d} (origin on the boundary by design).
    pub fn simplex_orth(shape: MatShape) -> Result<Self> {
        let d = shape.dim();
        let mut vertices = vec![vec![R::zero(); d]];
        for i in 0..d {
            let mut v = vec![R::zero(); d];
            v[i] = R::one();
            vertices.push(v);
        }
        Body::polytope(shape, vertices)
    }

    /// Random full-dimensional polytope: k points, recentred at their mean so
    /// the origin is interior almost surely.
    pub fn random_polytope(shape: MatShape, k: usize, rng: &mut impl Rng) -> Result<Self> {
        let d = shape.dim();
        if k < d + 1 {
            return Err(Error::Parameter(format!(
                "random polytope in dimension {d} needs at least {} points",
                d + 1
            )));
        }
        let mut pts: Vec<Vec<R>> = (0..k)
            .map(|_| (0..d).map(|_| R::of(rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let mut mean = vec![R::zero(); d];
        for p in &pts {
            for i in 0..d {
                mean[i] += p[i] / R::of_usize(k);
            }
        }
        for p in pts.iter_mut() {
            for i in 0..d {
                p[i] -= mean[i];
            }
        }
        Body::polytope(shape, pts)
    }

    // ------------------------------------------------------ basic queries

    pub fn shape(&self) -> MatShape {
        match self {
            Body::VertexPolytope { shape, .. }
            | Body::Segment { shape, .. }
            | Body::Ball { shape, .. }
            | Body::EllipsoidImage { shape, .. }
            | Body::SupportOracle { shape, .. }
            | Body::GaugeOracle { shape, .. } => *shape,
            Body::LpSum { terms, .. } => terms[0].1.shape(),
            Body::LeftImage { a, inner } => {
                let s = inner.shape();
                MatShape::of(a.rows, s.m)
            }
            Body::RightImage { b, inner } => {
                let s = inner.shape();
                MatShape::of(s.n, b.cols)
            }
            Body::Polar(inner) => inner.shape(),
        }
    }

    pub fn dim(&self) -> usize {
        self.shape().dim()
    }

    /// Vertex list when the representation carries one.
    pub fn vertices(&self) -> Option<Vec<Vec<R>>> {
        match self {
            Body::VertexPolytope { vertices, .. } => Some(vertices.clone()),
            Body::Segment { a, b, .. } => Some(vec![a.clone(), b.clone()]),
            _ => None,
        }
    }

    /// Support function h(x) = sup_{y ∈ K} ⟨y, x⟩. Exact per representation;
    /// 1-homogeneous; h(o) = 0.
    pub fn support(&self, x: &[R]) -> R {
        debug_assert_eq!(x.len(), self.dim(), "support: point has wrong dimension");
        match self {
            Body::VertexPolytope { vertices, .. } => vertices
                .iter()
                .map(|v| crate::geom::dot(v, x))
                .fold(R::neg_infinity(), R::max),
            Body::Segment { a, b, .. } => crate::geom::dot(a, x).max(crate::geom::dot(b, x)),
            Body::Ball { radius, .. } => *radius * norm(x),
            Body::EllipsoidImage { a, .. } => norm(&a.tr_mul_vec(x)),
            Body::LpSum { p, terms } => {
                if (*p - R::one()).abs() < R::of(1e-15) {
                    terms.iter().map(|(w, b)| *w * b.support(x)).sum()
                } else {
                    let mut s = R::zero();
                    for (w, b) in terms {
                        let h = b.support(x);
                        s += *w * h.abs().powf(*p);
                    }
                    s.powf(p.recip())
                }
            }
            Body::LeftImage { a, inner } => {
                let shape = self.shape();
                // h_{A.G}(x) = h_G(Aᵗ·x)
                let y = left_apply(&a.transpose(), x, shape);
                inner.support(&y)
            }
            Body::RightImage { b, inner } => {
                let shape = self.shape();
                // h_{G.B}(x) = h_G(x·Bᵗ)
                let y = right_apply(x, shape, &b.transpose());
                inner.support(&y)
            }
            Body::Polar(inner) => inner
                .gauge(x, &Tol::default())
                .unwrap_or_else(|_| R::nan()),
            Body::SupportOracle { oracle, .. } => oracle.eval(x),
            Body::GaugeOracle { .. } => R::nan(), // no closed support; callers use radial data
        }
    }

    /// Minkowski gauge ‖x‖_K = inf{λ > 0 : x ∈ λK}. Returns `+∞` outside the
    /// representable cone. Errors only when the representation has no gauge
    /// (support-only bodies).
    pub fn gauge(&self, x: &[R], tol: &Tol<R>) -> Result<R> {
        debug_assert_eq!(x.len(), self.dim(), "gauge: point has wrong dimension");
        match self {
            Body::VertexPolytope { vertices, .. } => gauge_vpoly(vertices, x, tol),
            Body::Segment { a, b, .. } => gauge_vpoly(&[a.clone(), b.clone()], x, tol),
            Body::Ball { radius, .. } => Ok(norm(x) / *radius),
            Body::EllipsoidImage { a_inv, .. } => Ok(norm(&a_inv.mul_vec(x))),
            Body::LeftImage { a, inner } => {
                if a.rows != a.cols {
                    return Err(Error::Unsupported("gauge of non-square left image".into()));
                }
                let shape = self.shape();
                let y = left_apply(&a.inverse()?, x, shape);
                inner.gauge(&y, tol)
            }
            Body::RightImage { b, inner } => {
                if b.rows != b.cols {
                    return Err(Error::Unsupported("gauge of non-square right image".into()));
                }
                let shape = self.shape();
                let y = right_apply(x, shape, &b.inverse()?);
                inner.gauge(&y, tol)
            }
            Body::Polar(inner) => Ok(inner.support(x)),
            Body::GaugeOracle { oracle, .. } => Ok(oracle.eval(x)),
            Body::LpSum { .. } | Body::SupportOracle { .. } => Err(Error::Unsupported(
                "gauge of a support-defined body; use a radial envelope (measure::radial_from_support) or polarize".into(),
            )),
        }
    }

    /// Membership x ∈ K with the policy slack.
    pub fn contains(&self, x: &[R], tol: &Tol<R>) -> Result<bool> {
        Ok(self.gauge(x, tol)? <= R::one() + tol.member)
    }

    /// Polar body K°. Requires the origin strictly interior. Collapses
    /// double polars and produces closed forms where cheap.
    pub fn polar(&self, tol: &Tol<R>) -> Result<Body<R>> {
        if !self.origin_interior(tol)? {
            return Err(Error::PolarUndefined(format!(
                "{:?}", ShortDesc(self)
            )));
        }
        Ok(match self {
            Body::Polar(inner) => (**inner).clone(),
            Body::Ball { shape, radius } => Body::Ball { shape: *shape, radius: radius.recip() },
            Body::EllipsoidImage { shape, a, a_inv } => {
                // (A·B)° = A^{-ᵗ}·B
                Body::EllipsoidImage {
                    shape: *shape,
                    a: a_inv.transpose(),
                    a_inv: a.transpose(),
                }
            }
            Body::VertexPolytope { shape, vertices } if shape.dim() == 2 => {
                let poly: Vec<[R; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
                let hull = hull::convex_hull_2d(&poly, tol)?;
                let polar = hull::polygon_polar(&hull, tol)?;
                Body::VertexPolytope {
                    shape: *shape,
                    vertices: polar.into_iter().map(|v| vec![v[0], v[1]]).collect(),
                }
            }
            Body::VertexPolytope { shape, vertices } if shape.dim() == 3 => {
                let pts: Vec<[R; 3]> = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
                let hull = hull::convex_hull_3d(&pts, tol)?;
                let facets = hull::hull3_facets(&hull, tol);
                let mut vs = Vec::with_capacity(facets.len());
                for f in facets {
                    if f.h <= tol.tiny {
                        return Err(Error::PolarUndefined("facet through the origin".into()));
                    }
                    vs.push(vec![f.normal[0] / f.h, f.normal[1] / f.h, f.normal[2] / f.h]);
                }
                Body::VertexPolytope { shape: *shape, vertices: vs }
            }
            other => Body::Polar(Box::new(other.clone())),
        })
    }

    /// Is the origin strictly interior? Exact for polytopes with nm ≤ 3 and
    /// closed-form bodies; cone-LP based for higher-dimensional polytopes;
    /// sampled (documented) for support-defined bodies.
    pub fn origin_interior(&self, tol: &Tol<R>) -> Result<bool> {
        match self {
            Body::Ball { radius, .. } => Ok(*radius > R::zero()),
            Body::EllipsoidImage { .. } => Ok(true),
            Body::GaugeOracle { .. } => Ok(true), // star bodies are built around o
            Body::Polar(inner) => inner.origin_interior(tol), // K bounded + o ∈ int K ⇔ same for K°
            Body::VertexPolytope { .. } | Body::Segment { .. } => {
                let vertices = self.vertices().unwrap();
                origin_interior_vpoly(&vertices, self.dim(), tol)
            }
            Body::LeftImage { a, inner } => {
                if a.rows == a.cols && a.det().abs() > tol.det {
                    inner.origin_interior(tol)
                } else {
                    Ok(false)
                }
            }
            Body::RightImage { b, inner } => {
                if b.rows == b.cols && b.det().abs() > tol.det {
                    inner.origin_interior(tol)
                } else {
                    Ok(false)
                }
            }
            Body::LpSum { .. } | Body::SupportOracle { .. } => {
                // Sampled check: minimum support over a deterministic
                // direction set must be positive.
                let d = self.dim();
                let dirs = deterministic_directions::<R>(d, 512);
                let mut hmin = R::infinity();
                for u in &dirs {
                    hmin = hmin.min(self.support(u));
                }
                Ok(hmin > tol.tiny)
            }
        }
    }

    /// Left action A·K (exact vertex/closed-form push-through where possible).
    pub fn transform_left(&self, a: &SmallMat<R>, tol: &Tol<R>) -> Result<Body<R>> {
        let shape = self.shape();
        if a.cols != shape.n {
            return Err(Error::ShapeMismatch {
                expected: format!("matrix with {} columns", shape.n),
                got: format!("{}x{}", a.rows, a.cols),
                context: "left action",
            });
        }
        Ok(match self {
            Body::VertexPolytope { vertices, .. } => Body::VertexPolytope {
                shape: MatShape::of(a.rows, shape.m),
                vertices: vertices.iter().map(|v| left_apply(a, v, shape)).collect(),
            },
            Body::Segment { a: pa, b: pb, .. } => Body::Segment {
                shape: MatShape::of(a.rows, shape.m),
                a: left_apply(a, pa, shape),
                b: left_apply(a, pb, shape),
            },
            Body::Ball { radius, .. } if a.rows == a.cols => {
                let flat = kron_left(a, shape.m);
                let mut scaled = flat;
                for v in scaled.a.iter_mut() {
                    *v = *v * *radius;
                }
                Body::ellipsoid(MatShape::of(a.rows, shape.m), scaled)?
            }
            Body::EllipsoidImage { a: e, .. } if a.rows == a.cols => {
                let flat = kron_left(a, shape.m);
                Body::ellipsoid(MatShape::of(a.rows, shape.m), flat.mul(e))?
            }
            Body::LpSum { p, terms } => Body::LpSum {
                p: *p,
                terms: terms
                    .iter()
                    .map(|(w, b)| Ok((*w, b.transform_left(a, tol)?)))
                    .collect::<Result<Vec<_>>>()?,
            },
            Body::Polar(inner) if a.rows == a.cols => {
                // A·(G°) = (A^{-ᵗ}·G)°
                let at_inv = a.inverse()?.transpose();
                Body::Polar(Box::new(inner.transform_left(&at_inv, tol)?))
            }
            other => Body::LeftImage { a: a.clone(), inner: Box::new(other.clone()) },
        })
    }

    /// Right action K·B.
    pub fn transform_right(&self, b: &SmallMat<R>, tol: &Tol<R>) -> Result<Body<R>> {
        let shape = self.shape();
        if b.rows != shape.m {
            return Err(Error::ShapeMismatch {
                expected: format!("matrix with {} rows", shape.m),
                got: format!("{}x{}", b.rows, b.cols),
                context: "right action",
            });
        }
        Ok(match self {
            Body::VertexPolytope { vertices, .. } => Body::VertexPolytope {
                shape: MatShape::of(shape.n, b.cols),
                vertices: vertices.iter().map(|v| right_apply(v, shape, b)).collect(),
            },
            Body::Segment { a: pa, b: pb, .. } => Body::Segment {
                shape: MatShape::of(shape.n, b.cols),
                a: right_apply(pa, shape, b),
                b: right_apply(pb, shape, b),
            },
            Body::Ball { radius, .. } if b.rows == b.cols => {
                let flat = kron_right(b, shape.n);
                let mut scaled = flat;
                for v in scaled.a.iter_mut() {
                    *v = *v * *radius;
                }
                Body::ellipsoid(MatShape::of(shape.n, b.cols), scaled)?
            }
            Body::EllipsoidImage { a: e, .. } if b.rows == b.cols => {
                let flat = kron_right(b, shape.n);
                Body::ellipsoid(MatShape::of(shape.n, b.cols), flat.mul(e))?
            }
            Body::LpSum { p, terms } => Body::LpSum {
                p: *p,
                terms: terms
                    .iter()
                    .map(|(w, t)| Ok((*w, t.transform_right(b, tol)?)))
                    .collect::<Result<Vec<_>>>()?,
            },
            Body::Polar(inner) if b.rows == b.cols => {
                let bt_inv = b.inverse()?.transpose();
                Body::Polar(Box::new(inner.transform_right(&bt_inv, tol)?))
            }
            other => Body::RightImage { b: b.clone(), inner: Box::new(other.clone()) },
        })
    }

    /// Translate by z (exact for vertex reps; support-wrapped otherwise).
    pub fn translate(&self, z: &[R]) -> Result<Body<R>> {
        let shape = self.shape();
        shape.check_point(z, "translate")?;
        Ok(match self {
            Body::VertexPolytope { vertices, .. } => Body::VertexPolytope {
                shape,
                vertices: vertices.iter().map(|v| crate::geom::add(v, z)).collect(),
            },
            Body::Segment { a, b, .. } => Body::Segment {
                shape,
                a: crate::geom::add(a, z),
                b: crate::geom::add(b, z),
            },
            other => {
                let inner = other.clone();
                let zz = z.to_vec();
                Body::support_oracle(shape, "translated body", move |x| {
                    inner.support(x) + crate::geom::dot(&zz, x)
                })
            }
        })
    }

    /// Transpose identification M[n,m] → M[m,n] (literal reps only).
    pub fn transpose_body(&self) -> Result<Body<R>> {
        let shape = self.shape();
        let tshape = shape.transpose();
        let tp = |v: &Vec<R>| -> Vec<R> {
            let mut out = vec![R::zero(); v.len()];
            for i in 0..shape.n {
                for j in 0..shape.m {
                    out[j * shape.n + i] = v[i * shape.m + j];
                }
            }
            out
        };
        Ok(match self {
            Body::VertexPolytope { vertices, .. } => Body::VertexPolytope {
                shape: tshape,
                vertices: vertices.iter().map(tp).collect(),
            },
            Body::Segment { a, b, .. } => Body::Segment { shape: tshape, a: tp(a), b: tp(b) },
            Body::Ball { radius, .. } => Body::Ball { shape: tshape, radius: *radius },
            _ => {
                return Err(Error::Unsupported(
                    "transpose only for vertex/segment/ball representations".into(),
                ))
            }
        })
    }

    /// Crude upper bound for max_{x∈K} |x| where the representation allows.
    pub fn outer_radius(&self) -> Result<R> {
        Ok(match self {
            Body::VertexPolytope { vertices, .. } => vertices
                .iter()
                .map(|v| norm(v))
                .fold(R::zero(), R::max),
            Body::Segment { a, b, .. } => norm(a).max(norm(b)),
            Body::Ball { radius, .. } => *radius,
            Body::EllipsoidImage { a, .. } => norm(&a.a), // Frobenius ≥ operator norm
            Body::GaugeOracle { outer_radius, .. } => *outer_radius,
            Body::LpSum { p, terms } => {
                let mut s = R::zero();
                for (w, b) in terms {
                    s += *w * b.outer_radius()?.powf(*p);
                }
                s.powf(p.recip())
            }
            Body::LeftImage { a, inner } => norm(&a.a) * inner.outer_radius()?,
            Body::RightImage { b, inner } => norm(&b.a) * inner.outer_radius()?,
            Body::Polar { .. } | Body::SupportOracle { .. } => {
                return Err(Error::Unsupported(
                    "outer radius of support-defined body; supply a bound explicitly".into(),
                ))
            }
        })
    }
}

struct ShortDesc<'a, R: Real>(&'a Body<R>);

impl<R: Real> std::fmt::Debug for ShortDesc<'_, R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.0 {
            Body::VertexPolytope { .. } => "vertex polytope",
            Body::Segment { .. } => "segment",
            Body::Ball { .. } => "ball",
            Body::EllipsoidImage { .. } => "ellipsoid image",
            Body::LpSum { .. } => "lp sum",
            Body::LeftImage { .. } => "left image",
            Body::RightImage { .. } => "right image",
            Body::Polar(_) => "polar",
            Body::SupportOracle { .. } => "support oracle",
            Body::GaugeOracle { .. } => "gauge oracle",
        };
        write!(f, "{kind} in {}", self.0.shape())
    }
}

/// Gauge of conv(vertices) via the LP  min Σμ  s.t.  Vμ = x, μ ≥ 0.
fn gauge_vpoly<R: Real>(vertices: &[Vec<R>], x: &[R], tol: &Tol<R>) -> Result<R> {
    let d = x.len();
    let k = vertices.len();
    let mut a = vec![R::zero(); d * k];
    for (j, v) in vertices.iter().enumerate() {
        for i in 0..d {
            a[i * k + j] = v[i];
        }
    }
    let mat = SmallMat::new(d, k, a);
    let c = vec![R::one(); k];
    match solve_min_eq(&mat, x, &c, tol)? {
        LpOutcome::Optimal { value, .. } => Ok(value.max(R::zero())),
        LpOutcome::Infeasible => Ok(R::infinity()),
        LpOutcome::Unbounded => Err(Error::Degenerate("gauge LP unbounded".into())),
    }
}

/// Is o strictly inside conv(vertices)? Exact facet check for d ≤ 3, cone LP
/// for d ≥ 4 (o interior ⇔ no direction u has ⟨v_i, u⟩ ≤ 0 for all i).
fn origin_interior_vpoly<R: Real>(vertices: &[Vec<R>], d: usize, tol: &Tol<R>) -> Result<bool> {
    let scale = vertices.iter().map(|v| norm(v)).fold(R::one(), R::max);
    let eps = tol.tiny * scale;
    match d {
        1 => {
            let lo = vertices.iter().map(|v| v[0]).fold(R::infinity(), R::min);
            let hi = vertices.iter().map(|v| v[0]).fold(R::neg_infinity(), R::max);
            Ok(lo < -eps && hi > eps)
        }
        2 => {
            let pts: Vec<[R; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
            let hull = match hull::convex_hull_2d(&pts, tol) {
                Ok(h) => h,
                Err(_) => return Ok(false),
            };
            Ok(hull::polygon_edges(&hull).iter().all(|e| e.h > eps))
        }
        3 => {
            let pts: Vec<[R; 3]> = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
            let hull = match hull::convex_hull_3d(&pts, tol) {
                Ok(h) => h,
                Err(_) => return Ok(false),
            };
            Ok(hull::hull3_facets(&hull, tol).iter().all(|f| f.h > eps))
        }
        _ => {
            // o ∈ int conv(V) ⇔ the cone {u : Vᵗu ≤ 0} is {0}. Probe each
            // signed coordinate: feasibility of Vᵗu ≤ 0, u_j = ±1.
            for j in 0..d {
                for sgn in [R::one(), -R::one()] {
                    if cone_direction_exists(vertices, d, j, sgn, tol)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Feasibility of { u : ⟨v_i, u⟩ ≤ 0 ∀i, u_j = sgn }.
fn cone_direction_exists<R: Real>(
    vertices: &[Vec<R>],
    d: usize,
    j: usize,
    sgn: R,
    tol: &Tol<R>,
) -> Result<bool> {
    // Variables: u = up - un (2d), slacks s (k). Rows: k inequalities as
    // equalities with slack, plus the pin u_j = sgn.
    let k = vertices.len();
    let nv = 2 * d + k;
    let rows = k + 1;
    let mut a = vec![R::zero(); rows * nv];
    let mut b = vec![R::zero(); rows];
    for (i, v) in vertices.iter().enumerate() {
        for t in 0..d {
            a[i * nv + t] = v[t];
            a[i * nv + d + t] = -v[t];
        }
        a[i * nv + 2 * d + i] = R::one();
        b[i] = R::zero();
    }
    a[k * nv + j] = R::one();
    a[k * nv + d + j] = -R::one();
    b[k] = sgn;
    let c = vec![R::zero(); nv];
    let mat = SmallMat::new(rows, nv, a);
    Ok(!matches!(
        solve_min_eq(&mat, &b, &c, tol)?,
        LpOutcome::Infeasible
    ))
}

/// kron(A, I_m): flat-space matrix of the left action x ↦ A·x on M[n,m].
pub fn kron_left<R: Real>(a: &SmallMat<R>, m: usize) -> SmallMat<R> {
    let k = a.rows;
    let n = a.cols;
    let mut out = vec![R::zero(); (k * m) * (n * m)];
    for i in 0..k {
        for t in 0..n {
            let v = a.at(i, t);
            if v != R::zero() {
                for j in 0..m {
                    out[(i * m + j) * (n * m) + (t * m + j)] = v;
                }
            }
        }
    }
    SmallMat::new(k * m, n * m, out)
}

/// kron(I_n, Bᵗ): flat-space matrix of the right action x ↦ x·B on M[n,m].
pub fn kron_right<R: Real>(b: &SmallMat<R>, n: usize) -> SmallMat<R> {
    let m = b.rows;
    let l = b.cols;
    let mut out = vec![R::zero(); (n * l) * (n * m)];
    for i in 0..n {
        for j in 0..l {
            for t in 0..m {
                let v = b.at(t, j);
                if v != R::zero() {
                    out[(i * l + j) * (n * m) + (i * m + t)] = v;
                }
            }
        }
    }
    SmallMat::new(n * l, n * m, out)
}

/// Deterministic, seed-free direction set (for sampled interiority checks).
pub fn deterministic_directions<R: Real>(d: usize, count: usize) -> Vec<Vec<R>> {
    // Digit-reversal (Halton) points mapped through the Gaussian construction;
    // fixed, no randomness, adequate for coarse geometric checks.
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let mut v = Vec::with_capacity(d);
        for (j, p) in PRIMES.iter().take(d).enumerate() {
            let u = radical_inverse(i + 17 * j, *p);
            v.push(crate::scalar::inv_std_normal(R::of(u)));
        }
        let n = norm(&v);
        if n > R::zero() {
            out.push(v.iter().map(|&x| x / n).collect());
        }
    }
    out
}

pub(crate) const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub(crate) fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

// ------------------------------------------------------------- JSON layer

/// Serializable body descriptor (f64, literal representations only).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyJson {
    Polytope { shape: [usize; 2], vertices: Vec<Vec<f64>> },
    Segment { shape: [usize; 2], a: Vec<f64>, b: Vec<f64> },
    Ball { shape: [usize; 2], radius: f64 },
    Ellipsoid { shape: [usize; 2], matrix: Vec<Vec<f64>> },
    LpSum { p: f64, terms: Vec<LpTermJson> },
    LeftImage { matrix: Vec<Vec<f64>>, inner: Box<BodyJson> },
    RightImage { matrix: Vec<Vec<f64>>, inner: Box<BodyJson> },
    Polar { inner: Box<BodyJson> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LpTermJson {
    pub weight: f64,
    pub body: BodyJson,
}

fn mat_to_rows(m: &SmallMat<f64>) -> Vec<Vec<f64>> {
    (0..m.rows)
        .map(|i| m.a[i * m.cols..(i + 1) * m.cols].to_vec())
        .collect()
}

fn rows_to_mat(rows: &[Vec<f64>]) -> Result<SmallMat<f64>> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Config("matrix rows empty or ragged".into()));
    }
    Ok(SmallMat::from_rows(rows))
}

impl BodyJson {
    pub fn from_body(body: &Body<f64>) -> Result<BodyJson> {
        Ok(match body {
            Body::VertexPolytope { shape, vertices } => BodyJson::Polytope {
                shape: [shape.n, shape.m],
                vertices: vertices.clone(),
            },
            Body::Segment { shape, a, b } => BodyJson::Segment {
                shape: [shape.n, shape.m],
                a: a.clone(),
                b: b.clone(),
            },
            Body::Ball { shape, radius } => BodyJson::Ball {
                shape: [shape.n, shape.m],
                radius: *radius,
            },
            Body::EllipsoidImage { shape, a, .. } => BodyJson::Ellipsoid {
                shape: [shape.n, shape.m],
                matrix: mat_to_rows(a),
            },
            Body::LpSum { p, terms } => BodyJson::LpSum {
                p: *p,
                terms: terms
                    .iter()
                    .map(|(w, b)| {
                        Ok(LpTermJson { weight: *w, body: BodyJson::from_body(b)? })
                    })
                    .collect::<Result<Vec<_>>>()?,
            },
            Body::LeftImage { a, inner } => BodyJson::LeftImage {
                matrix: mat_to_rows(a),
                inner: Box::new(BodyJson::from_body(inner)?),
            },
            Body::RightImage { b, inner } => BodyJson::RightImage {
                matrix: mat_to_rows(b),
                inner: Box::new(BodyJson::from_body(inner)?),
            },
            Body::Polar(inner) => BodyJson::Polar {
                inner: Box::new(BodyJson::from_body(inner)?),
            },
            Body::SupportOracle { .. } | Body::GaugeOracle { .. } => {
                return Err(Error::Unsupported(
                    "oracle-backed bodies have no JSON form".into(),
                ))
            }
        })
    }

    pub fn to_body(&self) -> Result<Body<f64>> {
        Ok(match self {
            BodyJson::Polytope { shape, vertices } => {
                Body::polytope(MatShape::of(shape[0], shape[1]), vertices.clone())?
            }
            BodyJson::Segment { shape, a, b } => {
                Body::segment(MatShape::of(shape[0], shape[1]), a.clone(), b.clone())?
            }
            BodyJson::Ball { shape, radius } => {
                Body::ball(MatShape::of(shape[0], shape[1]), *radius)?
            }
            BodyJson::Ellipsoid { shape, matrix } => {
                Body::ellipsoid(MatShape::of(shape[0], shape[1]), rows_to_mat(matrix)?)?
            }
            BodyJson::LpSum { p, terms } => Body::lp_sum(
                *p,
                terms
                    .iter()
                    .map(|t| Ok((t.weight, t.body.to_body()?)))
                    .collect::<Result<Vec<_>>>()?,
            )?,
            BodyJson::LeftImage { matrix, inner } => Body::LeftImage {
                a: rows_to_mat(matrix)?,
                inner: Box::new(inner.to_body()?),
            },
            BodyJson::RightImage { matrix, inner } => Body::RightImage {
                b: rows_to_mat(matrix)?,
                inner: Box::new(inner.to_body()?),
            },
            BodyJson::Polar { inner } => Body::Polar(Box::new(inner.to_body()?)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tol<f64> {
        Tol::default()
    }

    fn col2() -> MatShape {
        MatShape::col(2)
    }

    #[test]
    fn support_closed_forms() {
        let sq: Body<f64> = Body::cube(col2(), 1.0).unwrap();
        assert!((sq.support(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((sq.support(&[1.0, 1.0]) - 2.0).abs() < 1e-15);
        let ball: Body<f64> = Body::ball(col2(), 2.0).unwrap();
        assert!((ball.support(&[3.0, 4.0]) - 10.0).abs() < 1e-12);
        let seg: Body<f64> = Body::segment(MatShape::row(1), vec![-0.5], vec![0.5]).unwrap();
        assert!((seg.support(&[2.0]) - 1.0).abs() < 1e-15);
        assert!((seg.support(&[-2.0]) - 1.0).abs() < 1e-15);
        // support at the origin vanishes
        assert_eq!(sq.support(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn gauge_of_polytopes_matches_bisection_oracle() {
        // Oracle: smallest t with x/t ∈ K, found by bisection on membership
        // decided from the support side (finite direction sweep).
        let bodies = vec![
            Body::cube(col2(), 1.0).unwrap(),
            Body::cross(col2(), 1.0).unwrap(),
        ];
        let dirs: Vec<[f64; 2]> = (0..720)
            .map(|i| {
                let a = i as f64 / 720.0 * std::f64::consts::TAU;
                [a.cos(), a.sin()]
            })
            .collect();
        let probe = |k: &Body<f64>, x: &[f64]| -> f64 {
            // sup over directions of ⟨x,u⟩/h(u): equals the gauge for convex K
            dirs.iter()
                .map(|u| {
                    let h = k.support(&[u[0], u[1]]);
                    (x[0] * u[0] + x[1] * u[1]) / h
                })
                .fold(0.0f64, f64::max)
        };
        let pts = [[0.3, 0.4], [-0.9, 0.2], [1.5, 1.4], [0.0, 0.0], [0.0, -2.0]];
        for k in &bodies {
            for x in pts {
                let lp = k.gauge(&x, &tol()).unwrap();
                let oracle = probe(k, &x);
                assert!(
                    (lp - oracle).abs() <= 1e-3 * (1.0 + oracle),
                    "gauge {lp} vs oracle {oracle}"
                );
            }
        }
        // exact spot values
        let cube = &bodies[0];
        assert!((cube.gauge(&[0.5, -0.25], &tol()).unwrap() - 0.5).abs() < 1e-9);
        let cross = &bodies[1];
        assert!((cross.gauge(&[0.25, 0.25], &tol()).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gauge_outside_cone_is_infinite() {
        // Simplex conv{o, e1, e2}: directions with a negative coordinate lie
        // outside the support cone.
        let q = Body::simplex_orth(MatShape::row(2)).unwrap();
        let g = q.gauge(&[-1.0, 0.0], &tol()).unwrap();
        assert!(g.is_infinite());
        let g2 = q.gauge(&[0.25, 0.25], &tol()).unwrap();
        assert!((g2 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gauge_support_duality_on_ball_and_ellipsoid() {
        let e = Body::ellipsoid(
            col2(),
            SmallMat::new(2, 2, vec![2.0, 0.5, 0.0, 1.0]),
        )
        .unwrap();
        let polar = e.polar(&tol()).unwrap();
        for x in [[1.0, 0.0], [0.3, -1.2], [2.0, 2.0]] {
            let lhs = e.gauge(&x, &tol()).unwrap();
            let rhs = polar.support(&x);
            assert!((lhs - rhs).abs() < 1e-12, "gauge {lhs} vs polar support {rhs}");
        }
    }

    #[test]
    fn polar_round_trips() {
        let sq = Body::cube(col2(), 1.0).unwrap();
        let p = sq.polar(&tol()).unwrap();
        // polar of the unit cube is the cross polytope
        assert!((p.support(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
        assert!((p.support(&[1.0, 1.0]) - 1.0).abs() < 1e-12);
        let pp = p.polar(&tol()).unwrap();
        for x in [[1.0, 0.0], [0.7, -0.3], [1.0, 1.0]] {
            assert!((pp.support(&x) - sq.support(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_rejects_boundary_origin() {
        let q = Body::simplex_orth(MatShape::row(2)).unwrap();
        assert!(matches!(q.polar(&tol()), Err(Error::PolarUndefined(_))));
    }

    #[test]
    fn left_action_support_identity() {
        // h_{A.K}(x) = h_K(Aᵗ x)
        let k = Body::cube(col2(), 1.0).unwrap();
        let a = SmallMat::new(2, 2, vec![1.0, 2.0, -0.5, 1.5]);
        let ak = k.transform_left(&a, &tol()).unwrap();
        for x in [[1.0, 0.0], [0.3, 0.7], [-1.1, 0.9]] {
            let lhs = ak.support(&x);
            let rhs = k.support(&a.tr_mul_vec(&x));
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn right_action_on_row_body() {
        // Q ⊂ M[1,2], B ∈ R^{2×2}: h_{Q.B}(y) = h_Q(y Bᵗ)
        let q = Body::simplex_orth(MatShape::row(2)).unwrap();
        let b = SmallMat::new(2, 2, vec![0.0, 1.0, -1.0, 0.0]);
        let qb = q.transform_right(&b, &tol()).unwrap();
        for y in [[1.0, 0.0], [0.5, 0.5], [-0.25, 1.0]] {
            let yt = right_apply(&y, MatShape::row(2), &b.transpose());
            assert!((qb.support(&y) - q.support(&yt)).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_left_image_is_ellipsoid_in_matrix_space() {
        // A·(Frobenius ball in M[2,2]) must have support |kron(A,I)ᵗ x|.
        let shape = MatShape::of(2, 2);
        let ball = Body::ball(shape, 1.0).unwrap();
        let a = SmallMat::new(2, 2, vec![2.0, 1.0, 0.0, 1.0]);
        let img = ball.transform_left(&a, &tol()).unwrap();
        assert!(matches!(img, Body::EllipsoidImage { .. }));
        let x = vec![0.3, -0.2, 1.0, 0.5];
        let flat = kron_left(&a, 2);
        let expect = norm(&flat.tr_mul_vec(&x));
        assert!((img.support(&x) - expect).abs() < 1e-12);
    }

    #[test]
    fn lp_sum_support() {
        let s1 = Body::segment(MatShape::row(1), vec![-1.0], vec![1.0]).unwrap();
        let s2 = Body::segment(MatShape::row(1), vec![-2.0], vec![2.0]).unwrap();
        let fire = Body::lp_sum(2.0, vec![(1.0, s1.clone()), (1.0, s2)]).unwrap();
        // h² = 1·(1)² + 1·(2)² = 5 at x = 1
        assert!((fire.support(&[1.0]) - 5.0f64.sqrt()).abs() < 1e-12);
        // p = 1 is Minkowski addition
        let mink = Body::lp_sum(1.0, vec![(2.0, s1.clone()), (3.0, s1)]).unwrap();
        assert!((mink.support(&[1.0]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn origin_interior_checks() {
        let t = tol();
        assert!(Body::cube(col2(), 1.0).unwrap().origin_interior(&t).unwrap());
        assert!(!Body::simplex_orth(MatShape::row(2))
            .unwrap()
            .origin_interior(&t)
            .unwrap());
        // d = 4 goes through the cone LP
        let shape4 = MatShape::of(2, 2);
        assert!(Body::cube(shape4, 1.0).unwrap().origin_interior(&t).unwrap());
        assert!(!Body::simplex_orth(shape4).unwrap().origin_interior(&t).unwrap());
        let mut shifted = Body::cube(shape4, 1.0).unwrap();
        if let Body::VertexPolytope { vertices, .. } = &mut shifted {
            for v in vertices.iter_mut() {
                v[0] += 2.0; // o now outside
            }
        }
        assert!(!shifted.origin_interior(&t).unwrap());
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let body = Body::lp_sum(
            1.0,
            vec![
                (0.1 + 0.2, Body::cube(col2(), 0.3).unwrap()),
                (1.0 / 3.0, Body::ball(col2(), std::f64::consts::PI).unwrap()),
            ],
        )
        .unwrap();
        let j = BodyJson::from_body(&body).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        let j2: BodyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(j, j2);
        let s2 = serde_json::to_string(&j2).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let bad = r#"{"kind":"ball","shape":[2,1],"radius":1.0,"extra":3}"#;
        assert!(serde_json::from_str::<BodyJson>(bad).is_err());
    }

    #[test]
    fn spec_literal_parses() {
        let s = r#"{"shape":[2,1],"kind":"polytope","vertices":[[1.0,1.0],[-1.0,1.0],[-1.0,-1.0],[1.0,-1.0]]}"#;
        let j: BodyJson = serde_json::from_str(s).unwrap();
        let b = j.to_body().unwrap();
        assert!((b.support(&[1.0, 1.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn transpose_body_row_to_col() {
        let q: Body<f64> = Body::simplex_orth(MatShape::row(2)).unwrap();
        let qt = q.transpose_body().unwrap();
        assert_eq!(qt.shape(), MatShape::col(2));
        assert!((qt.support(&[1.0, 1.0]) - q.support(&[1.0, 1.0])).abs() < 1e-15);
    }
}
