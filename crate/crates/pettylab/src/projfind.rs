//! Constructive search for a rank-one projection P = rᵗ.l with P(Q) ⊆ Q:
//! the chord field f(ξ) (where the extremal chord of Q in direction ξ meets
//! ξ⊥), a sign-change bisection on its angular component in the plane, an
//! antipodality-gap descent on the sphere, and a certified assembly of P
//! from the chord through the origin.

use crate::bodies::{deterministic_directions, Body};
use crate::error::{Error, Result};
use crate::geom::{dot, norm, rot90, scaled, SmallMat};
use crate::hull::{convex_hull_3d, hull3_facets};
use crate::scalar::Real;
use crate::tol::Tol;

/// Rank-one projection acting on rows by q ↦ ⟨q, r⟩·l; trace ⟨r, l⟩ = 1
/// makes it idempotent.
#[derive(Clone, Debug)]
pub struct RankOneProjection<R: Real> {
    pub r: Vec<R>,
    pub l: Vec<R>,
}

impl<R: Real> RankOneProjection<R> {
    pub fn apply(&self, q: &[R]) -> Vec<R> {
        scaled(&self.l, dot(q, &self.r))
    }

    pub fn trace(&self) -> R {
        dot(&self.r, &self.l)
    }

    /// The m×m matrix rᵗ.l.
    pub fn matrix(&self) -> SmallMat<R> {
        let m = self.r.len();
        let mut data = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                data.push(self.r[i] * self.l[j]);
            }
        }
        SmallMat::new(m, m, data)
    }
}

/// A found projection together with its containment certificate.
#[derive(Clone, Debug)]
pub struct ProjectionReport<R: Real> {
    pub projection: RankOneProjection<R>,
    /// max over certificate samples of gauge_Q(P(q)) − 1; required ≤ 1e-6.
    pub certificate: R,
    /// Chord regularization radius used by the accepted attempt.
    pub eps: R,
    /// Chord-field / gap evaluations spent in the search.
    pub evals: usize,
    /// Number of certificate sample points.
    pub samples: usize,
}

const CERT_BOUND: f64 = 1e-6;
const SEARCH_BUDGET: usize = 100_000;

fn diameter<R: Real>(q: &Body<R>) -> Result<R> {
    match q {
        Body::Ball { radius, .. } => Ok(*radius + *radius),
        Body::EllipsoidImage { .. } => {
            let d = q.dim();
            let mut best = R::zero();
            for u in deterministic_directions(d, 512) {
                best = best.max(q.support(&u));
            }
            Ok(best + best)
        }
        _ => {
            let verts = q
                .vertices()
                .ok_or_else(|| Error::Unsupported("chord field needs a polytope, ball, or ellipsoid".into()))?;
            let mut best = R::zero();
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    let d: R = verts[i]
                        .iter()
                        .zip(&verts[j])
                        .map(|(a, b)| (*a - *b) * (*a - *b))
                        .sum();
                    best = best.max(d);
                }
            }
            Ok(best.sqrt())
        }
    }
}

fn origin_inside<R: Real>(q: &Body<R>, scale: R) -> Result<()> {
    let d = q.dim();
    let mut dirs = deterministic_directions(d, 256);
    for i in 0..d {
        let mut e = vec![R::zero(); d];
        e[i] = R::one();
        dirs.push(e.clone());
        e[i] = -R::one();
        dirs.push(e);
    }
    for u in &dirs {
        if q.support(u) < -R::of(1e-12) * scale {
            return Err(Error::Parameter("chord field requires a body containing the origin".into()));
        }
    }
    Ok(())
}

/// Support data in direction ξ: (attaining vertex indices, face barycenter,
/// support value). Polytope faces are detected at relative tolerance 1e-12;
/// smooth bodies return their unique support point.
fn support_face<R: Real>(q: &Body<R>, xi: &[R], scale: R) -> Result<(Vec<usize>, Vec<R>, R)> {
    match q {
        Body::Ball { radius, .. } => Ok((Vec::new(), scaled(xi, *radius), *radius)),
        Body::EllipsoidImage { a, .. } => {
            let w = a.tr_mul_vec(xi);
            let h = norm(&w);
            if h <= R::of(1e-300) {
                return Err(Error::Degenerate("ellipsoid support vanished".into()));
            }
            Ok((Vec::new(), a.mul_vec(&scaled(&w, h.recip())), h))
        }
        _ => {
            let verts = q
                .vertices()
                .ok_or_else(|| Error::Unsupported("chord field needs a polytope, ball, or ellipsoid".into()))?;
            let vals: Vec<R> = verts.iter().map(|v| dot(v, xi)).collect();
            let h = vals.iter().copied().fold(R::neg_infinity(), R::max);
            let tau = R::of(1e-12) * scale.max(R::one());
            let face: Vec<usize> =
                (0..verts.len()).filter(|&i| vals[i] >= h - tau).collect();
            let d = xi.len();
            let mut bary = vec![R::zero(); d];
            for &i in &face {
                for c in 0..d {
                    bary[c] += verts[i][c];
                }
            }
            let cnt = R::of_usize(face.len());
            for c in bary.iter_mut() {
                *c /= cnt;
            }
            Ok((face, bary, h))
        }
    }
}

/// Where the extremal chord of Q+εB in direction ξ meets ξ⊥, with the
/// barycenter tie-break on polytope faces.
pub fn chord_field_eps<R: Real>(q: &Body<R>, xi: &[R], eps: R, _tol: &Tol<R>) -> Result<Vec<R>> {
    let d = q.dim();
    if xi.len() != d {
        return Err(Error::Parameter("chord direction dimension mismatch".into()));
    }
    let nx = norm(xi);
    if (nx - R::one()).abs() > R::of(1e-9) {
        return Err(Error::Parameter("chord direction must be a unit vector".into()));
    }
    let scale = diameter(q)?;
    origin_inside(q, scale)?;
    let (_, bplus, _) = support_face(q, xi, scale)?;
    let neg: Vec<R> = xi.iter().map(|c| -*c).collect();
    let (_, bminus, _) = support_face(q, &neg, scale)?;
    let xplus: Vec<R> = bplus.iter().zip(xi).map(|(b, x)| *b + eps * *x).collect();
    let xminus: Vec<R> = bminus.iter().zip(xi).map(|(b, x)| *b - eps * *x).collect();
    let dvec: Vec<R> = xplus.iter().zip(&xminus).map(|(a, b)| *a - *b).collect();
    let denom = dot(&dvec, xi);
    if denom <= R::of(1e-14) * scale.max(R::one()) {
        return Err(Error::Degenerate("body is flat along the chord direction".into()));
    }
    let u = -dot(&xminus, xi) / denom;
    Ok(xminus.iter().zip(&dvec).map(|(a, b)| *a + u * *b).collect())
}

/// Chord field with the default regularization ε = 1e-4·diam(Q).
pub fn chord_field<R: Real>(q: &Body<R>, xi: &[R], tol: &Tol<R>) -> Result<Vec<R>> {
    let eps = R::of(1e-4) * diameter(q)?;
    chord_field_eps(q, xi, eps, tol)
}

/// Candidate rank-one maps at direction ξ. The range anchor sits on a
/// supporting face: the minimizing barycenter first, then the maximizing one.
/// Both are needed because when ξ is the normal of an edge on the minimizing
/// side, the chord through the origin runs from the opposite *vertex* into
/// that edge's interior, and only the vertex-side anchor reproduces it. If
/// the origin lies on the minimizing face, the range follows a maximizing
/// vertex instead.
fn projection_candidates<R: Real>(
    q: &Body<R>,
    xi: &[R],
    scale: R,
) -> Result<Vec<RankOneProjection<R>>> {
    let neg: Vec<R> = xi.iter().map(|c| -*c).collect();
    let (face_plus, bary_plus, hplus) = support_face(q, xi, scale)?;
    let (_, bary_minus, hminus) = support_face(q, &neg, scale)?;
    let delta = R::of(1e-9) * scale.max(R::one());
    if hplus <= delta && hminus <= delta {
        return Err(Error::Degenerate("body is flat through the origin along ξ".into()));
    }
    let mut anchors: Vec<Vec<R>> = Vec::new();
    if hminus <= delta {
        let anchor = if face_plus.is_empty() {
            bary_plus.clone()
        } else {
            q.vertices().expect("polytope face indices")[face_plus[0]].clone()
        };
        anchors.push(anchor);
    } else {
        anchors.push(bary_minus);
        if hplus > delta {
            anchors.push(bary_plus);
        }
    }
    Ok(anchors
        .into_iter()
        .map(|a| {
            let l = scaled(&a, dot(&a, xi).recip());
            RankOneProjection { r: xi.to_vec(), l }
        })
        .collect())
}

/// Assemble P at direction ξ from the primary (minimizing-side) anchor.
fn projection_at<R: Real>(q: &Body<R>, xi: &[R], scale: R) -> Result<RankOneProjection<R>> {
    Ok(projection_candidates(q, xi, scale)?
        .into_iter()
        .next()
        .expect("at least one anchor survives the degeneracy check"))
}

/// Containment certificate: max gauge excess of P over Q's vertices (exact
/// for polytopes, P being linear) or 10³ radial boundary samples.
fn certify<R: Real>(
    q: &Body<R>,
    p: &RankOneProjection<R>,
    tol: &Tol<R>,
) -> Result<(R, usize)> {
    let pts: Vec<Vec<R>> = if let Some(verts) = q.vertices() {
        verts
    } else {
        let d = q.dim();
        deterministic_directions(d, 1000)
            .into_iter()
            .map(|u| {
                let g = q.gauge(&u, tol)?;
                Ok(scaled(&u, g.recip()))
            })
            .collect::<Result<Vec<_>>>()?
    };
    let n = pts.len();
    let mut excess = R::neg_infinity();
    for x in &pts {
        let y = p.apply(x);
        let g = if norm(&y) <= R::of(1e-300) {
            R::zero()
        } else {
            q.gauge(&y, tol)?
        };
        excess = excess.max(g - R::one());
    }
    Ok((excess, n))
}

fn unit2<R: Real>(theta: R) -> Vec<R> {
    vec![theta.cos(), theta.sin()]
}

/// Signed angular component of the chord field; odd in ξ.
fn g_of<R: Real>(q: &Body<R>, theta: R, eps: R, tol: &Tol<R>) -> Result<R> {
    let xi = unit2(theta);
    let f = chord_field_eps(q, &xi, eps, tol)?;
    Ok(dot(&f, &rot90(&xi)))
}

/// Antipodality gap on S²: how far the exit point of the ray from the
/// minimizing barycenter through the origin is from attaining the maximum.
/// Vanishes exactly where a certified chord through the origin exists.
fn antipodal_gap<R: Real>(q: &Body<R>, xi: &[R], scale: R, tol: &Tol<R>) -> Result<R> {
    let neg: Vec<R> = xi.iter().map(|c| -*c).collect();
    let (_, xminus, hminus) = support_face(q, &neg, scale)?;
    let hplus = q.support(xi);
    let delta = R::of(1e-9) * scale.max(R::one());
    if hminus <= delta || hplus <= delta {
        return Ok(R::zero());
    }
    let gexit = q.gauge(&neg_vec(&xminus), tol)?;
    if gexit <= R::of(1e-300) {
        return Ok(R::zero());
    }
    let pstar = scaled(&xminus, -gexit.recip());
    Ok((hplus - dot(&pstar, xi)).max(R::zero()))
}

fn neg_vec<R: Real>(v: &[R]) -> Vec<R> {
    v.iter().map(|c| -*c).collect()
}

/// Find a rank-one projection with P(Q) ⊆ Q, certified on vertices or
/// boundary samples. m=1 returns the identity; m=2 bisects the odd angular
/// function g over a half circle and certifies the chord anchored on either
/// supporting face (the sign crossing may sit at an edge normal, where only
/// the vertex-side anchor yields a chord through the origin); m=3 enumerates
/// the chords through the origin whose endpoints can carry parallel
/// supporting planes (facet-normal and edge-pair candidates) and certifies
/// them in order of their supporting-plane residual.
pub fn find_projection<R: Real>(q: &Body<R>, tol: &Tol<R>) -> Result<ProjectionReport<R>> {
    let d = q.dim();
    if d == 0 || d > 3 {
        return Err(Error::Unsupported("projection search implemented for m ∈ {1,2,3}".into()));
    }
    let scale = diameter(q)?;
    origin_inside(q, scale)?;
    if d == 1 {
        let p = RankOneProjection { r: vec![R::one()], l: vec![R::one()] };
        let (cert, samples) = certify(q, &p, tol)?;
        return Ok(ProjectionReport { projection: p, certificate: cert, eps: R::zero(), evals: 0, samples });
    }
    if d == 3 {
        return find_projection_3d(q, scale, tol);
    }

    // chord regularization schedule: exact barycenter chords first, then
    // ε = 1e-4·diam shrunk ×10 per retry, with a rotated bracket
    let mut evals = 0usize;
    let mut last_cert = R::infinity();
    for attempt in 0..8 {
        let eps = if attempt == 0 {
            R::zero()
        } else {
            R::of(1e-4) * scale / R::of(10.0).powi(attempt as i32 - 1)
        };
        let theta0 = R::of(0.37) * R::of_usize(attempt);
        let xi_star = match bisect_plane(q, theta0, eps, &mut evals, scale, tol)? {
            Some(t) => unit2(t),
            None => continue,
        };
        for p in projection_candidates(q, &xi_star, scale)? {
            let (cert, samples) = certify(q, &p, tol)?;
            if cert <= R::of(CERT_BOUND) {
                return Ok(ProjectionReport { projection: p, certificate: cert, eps, evals, samples });
            }
            last_cert = last_cert.min(cert);
        }
    }
    Err(Error::NoConvergence(format!(
        "no zero located: projection certificate stayed at {last_cert:?} after the regularization schedule"
    )))
}

/// Sign-change bisection of g over [θ₀, θ₀+π], early-exiting on an exact
/// zero; returns the bracket midpoint at angular resolution 1e-12.
fn bisect_plane<R: Real>(
    q: &Body<R>,
    theta0: R,
    eps: R,
    evals: &mut usize,
    scale: R,
    tol: &Tol<R>,
) -> Result<Option<R>> {
    let zeta = R::of(1e-13) * scale.max(R::one());
    let mut a = theta0;
    let mut b = theta0 + R::pi();
    let ga = g_of(q, a, eps, tol)?;
    *evals += 1;
    if ga.abs() <= zeta {
        return Ok(Some(a));
    }
    let gb = g_of(q, b, eps, tol)?;
    *evals += 1;
    if gb.abs() <= zeta {
        return Ok(Some(b));
    }
    if (ga > R::zero()) == (gb > R::zero()) {
        return Ok(None); // oddness violated numerically; retry elsewhere
    }
    let positive_low = ga > R::zero();
    for _ in 0..52 {
        let mid = (a + b) * R::half();
        let gm = g_of(q, mid, eps, tol)?;
        *evals += 1;
        if gm.abs() <= zeta {
            return Ok(Some(mid));
        }
        if (gm > R::zero()) == positive_low {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some((a + b) * R::half()))
}

fn cross3<R: Real>(a: &[R; 3], b: &[R; 3]) -> [R; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3<R: Real>(a: &[R; 3], b: &[R; 3]) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A direction that may carry a chord through the origin with parallel
/// supporting planes, ranked by how far its endpoints miss the support.
struct Candidate<R: Real> {
    residual: R,
    xi: Vec<R>,
    /// Explicit range vector for edge-pair chords; facet-normal candidates
    /// fall back to the barycenter ray rule.
    l: Option<Vec<R>>,
}

/// R³ search: smooth centrally symmetric bodies admit any support direction;
/// polytopes are solved by enumerating facet normals (vertex-to-facet
/// chords) and common perpendiculars of edge pairs (edge-to-edge chords).
fn find_projection_3d<R: Real>(q: &Body<R>, scale: R, tol: &Tol<R>) -> Result<ProjectionReport<R>> {
    if matches!(q, Body::Ball { .. } | Body::EllipsoidImage { .. }) {
        let xi = vec![R::one(), R::zero(), R::zero()];
        let p = projection_at(q, &xi, scale)?;
        let (cert, samples) = certify(q, &p, tol)?;
        if cert <= R::of(CERT_BOUND) {
            return Ok(ProjectionReport { projection: p, certificate: cert, eps: R::zero(), evals: 1, samples });
        }
        return Err(Error::NoConvergence(
            "no zero located: symmetric chord failed to certify".into(),
        ));
    }
    let verts = q
        .vertices()
        .ok_or_else(|| Error::Unsupported("projection search needs a polytope, ball, or ellipsoid".into()))?;
    let pts: Vec<[R; 3]> = verts.iter().map(|v| [v[0], v[1], v[2]]).collect();
    let hull = convex_hull_3d(&pts, tol)?;
    let mut evals = 0usize;
    let mut cands: Vec<Candidate<R>> = Vec::new();

    for f in hull3_facets(&hull, tol) {
        for s in [R::one(), -R::one()] {
            let xi = vec![s * f.normal[0], s * f.normal[1], s * f.normal[2]];
            let residual = antipodal_gap(q, &xi, scale, tol)?;
            evals += 1;
            cands.push(Candidate { residual, xi, l: None });
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for f in &hull.faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let tiny = R::of(1e-12) * scale.max(R::one());
    let slack = R::of(1e-9);
    'pairs: for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            if evals >= SEARCH_BUDGET {
                break 'pairs;
            }
            let (a1i, b1i) = edges[i];
            let (a2i, b2i) = edges[j];
            if a1i == a2i || a1i == b2i || b1i == a2i || b1i == b2i {
                continue;
            }
            let a1 = &hull.points[a1i];
            let d1 = [
                hull.points[b1i][0] - a1[0],
                hull.points[b1i][1] - a1[1],
                hull.points[b1i][2] - a1[2],
            ];
            let a2 = &hull.points[a2i];
            let d2 = [
                hull.points[b2i][0] - a2[0],
                hull.points[b2i][1] - a2[1],
                hull.points[b2i][2] - a2[2],
            ];
            evals += 1;
            // chord through o meeting both edge lines: x on the plane
            // spanned by o and the second edge line
            let n2 = cross3(a2, &d2);
            let denom = dot3(&d1, &n2);
            if denom.abs() <= tiny * scale {
                continue;
            }
            let t = -dot3(a1, &n2) / denom;
            if t < -slack || t > R::one() + slack {
                continue;
            }
            let x = [a1[0] + t * d1[0], a1[1] + t * d1[1], a1[2] + t * d1[2]];
            let dxx = cross3(&d2, &x);
            let k = (0..3).max_by(|&u, &v| dxx[u].abs().partial_cmp(&dxx[v].abs()).unwrap()).unwrap();
            if dxx[k].abs() <= tiny * scale {
                continue;
            }
            let axx = cross3(a2, &x);
            let s = -axx[k] / dxx[k];
            if s < -slack || s > R::one() + slack {
                continue;
            }
            let y = [a2[0] + s * d2[0], a2[1] + s * d2[1], a2[2] + s * d2[2]];
            if dot3(&x, &y) >= -tiny * scale {
                continue; // origin not strictly between the endpoints
            }
            let per = cross3(&d1, &d2);
            let pn = dot3(&per, &per).sqrt();
            if pn <= tiny * scale {
                continue;
            }
            let mut xi = vec![per[0] / pn, per[1] / pn, per[2] / pn];
            let hx = dot3(&[xi[0], xi[1], xi[2]], &x);
            if hx.abs() <= tiny {
                continue;
            }
            if hx < R::zero() {
                for c in xi.iter_mut() {
                    *c = -*c;
                }
            }
            let neg: Vec<R> = xi.iter().map(|c| -*c).collect();
            let rx = q.support(&xi) - dot(&xi, &x[..]);
            let ry = q.support(&neg) - dot(&neg, &y[..]);
            let residual = rx.max(ry).max(R::zero());
            let ldenom = dot(&xi, &y[..]);
            if ldenom.abs() <= tiny {
                continue;
            }
            let l = vec![y[0] / ldenom, y[1] / ldenom, y[2] / ldenom];
            cands.push(Candidate { residual, xi, l: Some(l) });
        }
    }

    cands.sort_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap());
    let mut last_cert = R::infinity();
    for cand in cands.iter().take(64) {
        let p = match &cand.l {
            Some(l) => RankOneProjection { r: cand.xi.clone(), l: l.clone() },
            None => projection_at(q, &cand.xi, scale)?,
        };
        let (cert, samples) = certify(q, &p, tol)?;
        evals += 1;
        if cert <= R::of(CERT_BOUND) {
            return Ok(ProjectionReport { projection: p, certificate: cert, eps: R::zero(), evals, samples });
        }
        last_cert = last_cert.min(cert);
    }
    Err(Error::NoConvergence(format!(
        "no zero located: best candidate certificate {last_cert:?} after enumerating chords"
    )))
}
