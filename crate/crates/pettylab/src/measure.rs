//! Surface-area measures, Lp and dual mixed volumes, volume computation by
//! three routes (exact, polar formula, Monte-Carlo membership), and the two
//! distinguished centers (centroid, Santaló point).

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::geom::{dot, norm, rot90, MatShape};
use crate::hull::{
    convex_hull_2d, convex_hull_3d, hull3_centroid, hull3_facets, hull3_volume, polygon_area,
    polygon_centroid, polygon_edges, halfplanes_to_polygon,
};
use crate::quadrature::{Estimate, SphereQuadrature, REPLICATES};
use crate::rng::{uniform_in_box, SeedSplitter};
use crate::scalar::{unit_ball_volume, Real};
use crate::tol::Tol;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A finite atomic measure on the unit sphere of `R^dim`.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure<R> {
    pub dim: usize,
    /// (unit direction, positive weight)
    pub atoms: Vec<(Vec<R>, R)>,
}

impl<R: Real> DiscreteMeasure<R> {
    pub fn total(&self) -> R {
        self.atoms.iter().map(|(_, w)| *w).sum()
    }

    /// Σ wᵢ·uᵢ — vanishes for the surface measure of a full-dimensional body.
    pub fn center_of_mass(&self) -> Vec<R> {
        let mut c = vec![R::zero(); self.dim];
        for (u, w) in &self.atoms {
            for (ci, ui) in c.iter_mut().zip(u) {
                *ci += *w * *ui;
            }
        }
        c
    }
}

/// The Lp surface area measure σ_{K,p}: the classical surface measure with
/// each facet's weight multiplied by h_K(normal)^{1−p}.
///
/// Polytopes (dim ≤ 3) get exact facet atoms; balls get product-rule nodes
/// (`ball_nodes` of them). For p > 1 the origin must be interior, otherwise
/// h^{1−p} is not integrable against σ_K.
pub fn lp_surface_measure<R: Real>(
    k: &Body<R>,
    p: R,
    ball_nodes: usize,
    tol: &Tol<R>,
) -> Result<DiscreteMeasure<R>> {
    if p < R::one() {
        return Err(Error::Parameter(format!("lp surface measure needs p >= 1, got {p}")));
    }
    let d = k.dim();
    let raw: Vec<(Vec<R>, R, R)> = match k {
        Body::VertexPolytope { vertices, .. } => match d {
            1 => {
                let xs: Vec<R> = vertices.iter().map(|v| v[0]).collect();
                let hi = xs.iter().cloned().fold(R::neg_infinity(), R::max);
                let lo = xs.iter().cloned().fold(R::infinity(), R::min);
                if hi - lo <= tol.tiny {
                    return Err(Error::Degenerate("interval has no length".into()));
                }
                vec![(vec![R::one()], R::one(), hi), (vec![-R::one()], R::one(), -lo)]
            }
            2 => {
                let vs: Vec<[R; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
                let hull = convex_hull_2d(&vs, tol)?;
                polygon_edges(&hull)
                    .into_iter()
                    .map(|e| (vec![e.normal[0], e.normal[1]], e.len, e.h))
                    .collect()
            }
            3 => {
                let vs: Vec<[R; 3]> = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
                let hull = convex_hull_3d(&vs, tol)?;
                hull3_facets(&hull, tol)
                    .into_iter()
                    .map(|f| (f.normal.to_vec(), f.area, f.h))
                    .collect()
            }
            _ => {
                return Err(Error::Unsupported(
                    "facet enumeration is available only for dim <= 3; approximate the body by a polytope there".into(),
                ))
            }
        },
        Body::Ball { radius, .. } => {
            let quad = SphereQuadrature::product(d, ball_nodes)?;
            let rpow = radius.powf(R::of_usize(d) - R::one());
            quad.nodes
                .into_iter()
                .zip(quad.weights)
                .map(|(u, w)| (u, w * rpow, *radius))
                .collect()
        }
        _ => {
            return Err(Error::Unsupported(
                "lp surface measure takes a polytope (dim <= 3) or a ball; approximate other bodies by polytopes".into(),
            ))
        }
    };
    let scale = raw
        .iter()
        .map(|(_, _, h)| h.abs())
        .fold(R::zero(), R::max)
        .max(R::one());
    let mut atoms = Vec::with_capacity(raw.len());
    for (u, area, h) in raw {
        if area <= tol.tiny {
            continue;
        }
        let w = if p == R::one() {
            area
        } else {
            if h <= tol.tiny * scale {
                return Err(Error::LpMeasureUndefined(format!(
                    "h_K = {h} on a facet normal with p = {p}; origin must be interior"
                )));
            }
            area * h.powf(R::one() - p)
        };
        atoms.push((u, w));
    }
    if atoms.is_empty() {
        return Err(Error::Degenerate("no facets with positive area".into()));
    }
    Ok(DiscreteMeasure { dim: d, atoms })
}

/// Classical surface area measure σ_K (the p = 1 case).
pub fn surface_measure<R: Real>(k: &Body<R>, tol: &Tol<R>) -> Result<DiscreteMeasure<R>> {
    lp_surface_measure(k, R::one(), 256, tol)
}

/// V_{p,d}(K, L) = (1/d) ∫ h_L(u)^p dσ_{K,p}(u), from a precomputed σ_{K,p}.
/// Requires h_L ≥ 0 on the atoms when p is not an integer.
pub fn lp_mixed_volume_meas<R: Real>(sigma: &DiscreteMeasure<R>, l: &Body<R>, p: R) -> Result<R> {
    let mut s = R::zero();
    for (u, w) in &sigma.atoms {
        let h = l.support(u);
        if !h.is_finite() {
            return Err(Error::Unsupported(
                "support of L not evaluable on a measure atom".into(),
            ));
        }
        s += *w * h.powf(p);
    }
    let v = s / R::of_usize(sigma.dim);
    if !v.is_finite() {
        return Err(Error::Parameter(
            "mixed volume integrand not finite (negative support with fractional p?)".into(),
        ));
    }
    Ok(v)
}

/// V_{p,d}(K, L) building σ_{K,p} on the fly.
pub fn lp_mixed_volume<R: Real>(
    k: &Body<R>,
    l: &Body<R>,
    p: R,
    ball_nodes: usize,
    tol: &Tol<R>,
) -> Result<R> {
    let sigma = lp_surface_measure(k, p, ball_nodes, tol)?;
    lp_mixed_volume_meas(&sigma, l, p)
}

/// The pth dual mixed volume Ṽ_{−p,d}(K, L) = (1/d) ∫ ρ_K^{d+p} ρ_L^{−p} dθ,
/// evaluated through the gauges (ρ = 1/gauge). Both bodies must be star
/// bodies with positive radial function (gauge finite and positive on nodes).
pub fn dual_mixed_volume<R: Real>(
    k: &Body<R>,
    l: &Body<R>,
    p: R,
    quad: &SphereQuadrature<R>,
    tol: &Tol<R>,
) -> Result<Estimate<R>> {
    let d = R::of_usize(quad.dim);
    for probe in quad.nodes.iter().take(4) {
        for (b, name) in [(k, "K"), (l, "L")] {
            let g = b.gauge(probe, tol)?;
            if !g.is_finite() || g <= R::zero() {
                return Err(Error::NotStarBody(format!(
                    "{name} has gauge {g} at a quadrature node"
                )));
            }
        }
    }
    let est = quad.integrate(|theta| {
        let gk = k.gauge(theta, tol).unwrap_or_else(|_| R::nan());
        let gl = l.gauge(theta, tol).unwrap_or_else(|_| R::nan());
        gk.powf(-(d + p)) * gl.powf(p)
    });
    if !est.value.is_finite() {
        return Err(Error::NotStarBody(
            "dual mixed volume integrand not finite on some node".into(),
        ));
    }
    Ok(est.scale(d.recip()))
}

// --------------------------------------------------------------- volumes

/// How to compute a volume. Exact paths exist for polytopes (dim ≤ 3),
/// balls, ellipsoid images, and left/right images of those.
#[derive(Clone, Debug)]
pub enum VolumeMethod<'q, R: Real> {
    Exact,
    /// vol = (1/d)∫ρ^d dθ; needs the origin interior and a matching quad.
    PolarFormula(&'q SphereQuadrature<R>),
    /// Membership sampling in the centered box with the given half-widths.
    McMembership { samples: usize, seed: u64, half_widths: Vec<R> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeEstimate<R> {
    pub value: R,
    pub stderr: R,
    pub method: String,
}

impl<R: Real> VolumeEstimate<R> {
    pub fn exact(value: R) -> Self {
        VolumeEstimate { value, stderr: R::zero(), method: "exact".into() }
    }

    pub fn estimate(&self) -> Estimate<R> {
        Estimate { value: self.value, stderr: self.stderr }
    }
}

pub fn volume<R: Real>(
    body: &Body<R>,
    method: &VolumeMethod<R>,
    tol: &Tol<R>,
) -> Result<VolumeEstimate<R>> {
    match method {
        VolumeMethod::Exact => volume_exact(body, tol).map(VolumeEstimate::exact),
        VolumeMethod::PolarFormula(quad) => {
            let est = volume_radial(body, quad, tol)?;
            Ok(VolumeEstimate { value: est.value, stderr: est.stderr, method: "polar-formula".into() })
        }
        VolumeMethod::McMembership { samples, seed, half_widths } => {
            let d = body.dim();
            if half_widths.len() != d {
                return Err(Error::Parameter(format!(
                    "bounding box has {} half-widths for a dim-{d} body",
                    half_widths.len()
                )));
            }
            // Surface any structural gauge failure before sampling.
            let probe = vec![R::zero(); d];
            match body.gauge(&probe, tol) {
                Err(Error::Unsupported(m)) => return Err(Error::Unsupported(m)),
                _ => {}
            }
            let member = |x: &[R]| body.gauge(x, tol).map(|g| g <= R::one() + tol.member).unwrap_or(false);
            let est = mc_volume_membership(d, member, *samples, *seed, half_widths)?;
            Ok(VolumeEstimate { value: est.value, stderr: est.stderr, method: "mc-membership".into() })
        }
    }
}

fn volume_exact<R: Real>(body: &Body<R>, tol: &Tol<R>) -> Result<R> {
    let d = body.dim();
    match body {
        Body::VertexPolytope { vertices, .. } => match d {
            1 => {
                let xs: Vec<R> = vertices.iter().map(|v| v[0]).collect();
                let hi = xs.iter().cloned().fold(R::neg_infinity(), R::max);
                let lo = xs.iter().cloned().fold(R::infinity(), R::min);
                Ok(hi - lo)
            }
            2 => {
                let vs: Vec<[R; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
                let hull = convex_hull_2d(&vs, tol)?;
                Ok(polygon_area(&hull))
            }
            3 => {
                let vs: Vec<[R; 3]> = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
                let hull = convex_hull_3d(&vs, tol)?;
                Ok(hull3_volume(&hull))
            }
            _ => Err(Error::Unsupported("exact polytope volume only for dim <= 3".into())),
        },
        Body::Segment { a, b, .. } => {
            if d == 1 {
                Ok((b[0] - a[0]).abs())
            } else {
                Ok(R::zero())
            }
        }
        Body::Ball { radius, .. } => Ok(unit_ball_volume::<R>(d) * radius.powf(R::of_usize(d))),
        Body::EllipsoidImage { a, .. } => Ok(unit_ball_volume::<R>(d) * a.det().abs()),
        Body::LeftImage { a, inner } => {
            let m = inner.shape().m;
            Ok(a.det().abs().powf(R::of_usize(m)) * volume_exact(inner, tol)?)
        }
        Body::RightImage { b, inner } => {
            let n = inner.shape().n;
            Ok(b.det().abs().powf(R::of_usize(n)) * volume_exact(inner, tol)?)
        }
        _ => Err(Error::Unsupported(
            "no exact volume for this representation; use the polar formula or MC".into(),
        )),
    }
}

/// Polar formula vol = (1/d)∫ gauge(θ)^{−d} dθ.
pub fn volume_radial<R: Real>(
    body: &Body<R>,
    quad: &SphereQuadrature<R>,
    tol: &Tol<R>,
) -> Result<Estimate<R>> {
    let d = body.dim();
    if quad.dim != d {
        return Err(Error::ShapeMismatch {
            expected: d.to_string(),
            got: quad.dim.to_string(),
            context: "quadrature dimension for the polar volume formula",
        });
    }
    let dr = R::of_usize(d);
    for probe in quad.nodes.iter().take(4) {
        let g = body.gauge(probe, tol)?;
        if !g.is_finite() || g <= R::zero() {
            return Err(Error::NotStarBody(format!("gauge {g} at a quadrature node")));
        }
    }
    let est = quad.integrate(|theta| {
        body.gauge(theta, tol)
            .map(|g| g.powf(-dr))
            .unwrap_or_else(|_| R::nan())
    });
    if !est.value.is_finite() {
        return Err(Error::NotStarBody("polar volume integrand not finite".into()));
    }
    Ok(est.scale(dr.recip()))
}

/// Seeded membership Monte Carlo over a centered box; standard error from
/// `REPLICATES` independent streams.
pub fn mc_volume_membership<R: Real>(
    dim: usize,
    is_member: impl Fn(&[R]) -> bool + Sync,
    samples: usize,
    seed: u64,
    half_widths: &[R],
) -> Result<Estimate<R>> {
    if half_widths.len() != dim || half_widths.iter().any(|h| *h <= R::zero()) {
        return Err(Error::Parameter("bounding box must have positive half-widths, one per dimension".into()));
    }
    let box_vol: R = half_widths.iter().fold(R::one(), |acc, h| acc * R::two() * *h);
    let per = (samples / REPLICATES).max(1);
    let split = SeedSplitter::new(seed);
    let fracs: Vec<R> = (0..REPLICATES)
        .into_par_iter()
        .map(|rep| {
            let mut rng = split.substream("volume.mc", rep as u64);
            let mut hit = 0usize;
            for _ in 0..per {
                let x = uniform_in_box(&mut rng, half_widths);
                if is_member(&x) {
                    hit += 1;
                }
            }
            R::of_usize(hit) / R::of_usize(per)
        })
        .collect();
    let k = R::of_usize(REPLICATES);
    let mean: R = fracs.iter().copied().sum::<R>() / k;
    let var: R = fracs.iter().map(|&f| (f - mean) * (f - mean)).sum::<R>() / (k - R::one());
    Ok(Estimate { value: mean * box_vol, stderr: (var / k).sqrt() * box_vol })
}

// --------------------------------------------------------------- centers

/// Exact centroid for closed-form representations (polytopes dim ≤ 3, balls,
/// ellipsoid images, linear images thereof).
pub fn centroid<R: Real>(body: &Body<R>, tol: &Tol<R>) -> Result<Vec<R>> {
    let d = body.dim();
    match body {
        Body::VertexPolytope { vertices, .. } => match d {
            1 => {
                let xs: Vec<R> = vertices.iter().map(|v| v[0]).collect();
                let hi = xs.iter().cloned().fold(R::neg_infinity(), R::max);
                let lo = xs.iter().cloned().fold(R::infinity(), R::min);
                Ok(vec![(hi + lo) * R::half()])
            }
            2 => {
                let vs: Vec<[R; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
                let hull = convex_hull_2d(&vs, tol)?;
                let c = polygon_centroid(&hull);
                Ok(c.to_vec())
            }
            3 => {
                let vs: Vec<[R; 3]> = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
                let hull = convex_hull_3d(&vs, tol)?;
                Ok(hull3_centroid(&hull).to_vec())
            }
            _ => Err(Error::Unsupported("exact centroid only for dim <= 3 polytopes".into())),
        },
        Body::Segment { a, b, .. } => Ok(a.iter().zip(b).map(|(x, y)| (*x + *y) * R::half()).collect()),
        Body::Ball { .. } | Body::EllipsoidImage { .. } => Ok(vec![R::zero(); d]),
        Body::LeftImage { a, inner } => {
            let c = centroid(inner, tol)?;
            Ok(crate::geom::left_apply(a, &c, inner.shape()))
        }
        Body::RightImage { b, inner } => {
            let c = centroid(inner, tol)?;
            Ok(crate::geom::right_apply(&c, inner.shape(), b))
        }
        _ => Err(Error::Unsupported("no exact centroid for this representation; sample it".into())),
    }
}

/// Monte-Carlo centroid from accepted membership samples.
pub fn centroid_mc<R: Real>(
    body: &Body<R>,
    samples: usize,
    seed: u64,
    half_widths: &[R],
    tol: &Tol<R>,
) -> Result<Vec<R>> {
    let d = body.dim();
    if half_widths.len() != d {
        return Err(Error::Parameter("bounding box half-widths must match the dimension".into()));
    }
    let split = SeedSplitter::new(seed);
    let mut rng = split.stream("centroid.mc");
    let mut acc = vec![R::zero(); d];
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = uniform_in_box(&mut rng, half_widths);
        if body.gauge(&x, tol).map(|g| g <= R::one() + tol.member).unwrap_or(false) {
            for (a, xi) in acc.iter_mut().zip(&x) {
                *a += *xi;
            }
            hits += 1;
        }
    }
    if hits == 0 {
        return Err(Error::SamplerInefficient("no membership hits for the centroid".into()));
    }
    Ok(acc.into_iter().map(|a| a / R::of_usize(hits)).collect())
}

/// vol((K − s)°) = (1/d) ∫ (h_K(θ) − ⟨s, θ⟩)^{−d} dθ for s interior.
pub fn polar_volume_about<R: Real>(
    body: &Body<R>,
    s: &[R],
    quad: &SphereQuadrature<R>,
) -> Result<Estimate<R>> {
    let d = body.dim();
    if quad.dim != d || s.len() != d {
        return Err(Error::ShapeMismatch {
            expected: d.to_string(),
            got: quad.dim.to_string(),
            context: "polar volume about a point",
        });
    }
    let dr = R::of_usize(d);
    let est = quad.integrate(|theta| {
        let margin = body.support(theta) - dot(s, theta);
        if margin > R::zero() {
            margin.powf(-dr)
        } else {
            R::nan()
        }
    });
    if !est.value.is_finite() {
        return Err(Error::Parameter("point is not interior to the body".into()));
    }
    Ok(est.scale(dr.recip()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SantaloResult<R> {
    pub point: Vec<R>,
    /// Dimensionless gradient certificate |∇f|·scale/(d·f) at the returned point.
    pub grad_certificate: R,
    pub polar_volume: Estimate<R>,
    pub sweeps: usize,
}

/// Santaló point: the interior point minimizing s ↦ vol((K−s)°).
///
/// Works on the discretized functional f(s) = (1/d)Σ wᵢ(hᵢ − ⟨s,θᵢ⟩)^{−d}
/// over the quadrature nodes, by cyclic coordinate-wise bisection on the
/// (monotone) partial derivatives — f is smooth and strictly convex where
/// finite, so each coordinate zero is unique.
pub fn santalo_point<R: Real>(
    body: &Body<R>,
    quad: &SphereQuadrature<R>,
    tol: &Tol<R>,
) -> Result<SantaloResult<R>> {
    let d = body.dim();
    if quad.dim != d {
        return Err(Error::ShapeMismatch {
            expected: d.to_string(),
            got: quad.dim.to_string(),
            context: "quadrature dimension for the Santaló search",
        });
    }
    let hs: Vec<R> = quad.nodes.iter().map(|t| body.support(t)).collect();
    if hs.iter().any(|h| !h.is_finite()) {
        return Err(Error::Unsupported("support not evaluable on quadrature nodes".into()));
    }
    let scale = hs.iter().fold(R::zero(), |a, h| a.max(h.abs())).max(tol.tiny);
    let nodes = &quad.nodes;
    let weights = &quad.weights;
    let dr = R::of_usize(d);

    let margin = |s: &[R], i: usize| hs[i] - dot(s, &nodes[i]);
    // ∂f/∂s_j, up to the positive constant factor 1/d is absorbed; sign is what matters.
    let grad = |s: &[R]| -> Vec<R> {
        let mut g = vec![R::zero(); d];
        for i in 0..nodes.len() {
            let m = margin(s, i);
            let c = weights[i] * m.powf(-(dr + R::one()));
            for (gj, tj) in g.iter_mut().zip(&nodes[i]) {
                *gj += c * *tj;
            }
        }
        g
    };
    let f_val = |s: &[R]| -> R {
        let mut v = R::zero();
        for i in 0..nodes.len() {
            v += weights[i] * margin(s, i).powf(-dr);
        }
        v / dr
    };

    let mut s = vec![R::zero(); d];
    // Start from an interior point: the origin if interior, else shrink from
    // a support-based center.
    if hs.iter().cloned().fold(R::infinity(), R::min) <= tol.tiny * scale {
        return Err(Error::Parameter(
            "origin not interior at the quadrature resolution; translate the body first".into(),
        ));
    }
    let mut sweeps = 0usize;
    let max_sweeps = 600usize;
    let target = R::of(1e-7);
    let mut cert = R::infinity();
    while sweeps < max_sweeps {
        sweeps += 1;
        for j in 0..d {
            // Feasible slab for s_j (others fixed): margins stay positive.
            let mut lo = R::neg_infinity();
            let mut hi = R::infinity();
            for i in 0..nodes.len() {
                let tj = nodes[i][j];
                let c = margin(&s, i) + s[j] * tj; // h_i - Σ_{k≠j} s_k θ_{ik}
                if tj > tol.tiny {
                    hi = hi.min(c / tj);
                } else if tj < -tol.tiny {
                    lo = lo.max(c / tj);
                }
            }
            let width = hi - lo;
            if !width.is_finite() || width <= R::zero() {
                return Err(Error::NoConvergence("empty feasible slab in Santaló descent".into()));
            }
            let pad = width * R::of(1e-9);
            let (mut a, mut b) = (lo + pad, hi - pad);
            let gj = |t: R, s: &[R]| -> R {
                let mut g = R::zero();
                for i in 0..nodes.len() {
                    let tj = nodes[i][j];
                    let m = margin(s, i) + (s[j] - t) * tj;
                    g += weights[i] * m.powf(-(dr + R::one())) * tj;
                }
                g
            };
            if gj(a, &s) >= R::zero() {
                s[j] = a;
                continue;
            }
            if gj(b, &s) <= R::zero() {
                s[j] = b;
                continue;
            }
            for _ in 0..200 {
                let mid = (a + b) * R::half();
                if gj(mid, &s) > R::zero() {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= tol.bisect * scale {
                    break;
                }
            }
            s[j] = (a + b) * R::half();
        }
        let g = grad(&s);
        cert = norm(&g) * scale / (dr * f_val(&s).max(tol.tiny));
        if cert <= target {
            break;
        }
    }
    if cert > target {
        return Err(Error::NoConvergence(format!(
            "Santaló descent stalled after {sweeps} sweeps with certificate {cert}"
        )));
    }
    let pv = polar_volume_about(body, &s, quad)?;
    Ok(SantaloResult { point: s, grad_certificate: cert, polar_volume: pv, sweeps })
}

// ------------------------------------------------- 2D support-side helpers

/// Outer polygon of a 2D convex body from `k` support evaluations.
pub fn support_polygon<R: Real>(body: &Body<R>, k: usize, tol: &Tol<R>) -> Result<Vec<[R; 2]>> {
    if body.dim() != 2 {
        return Err(Error::ShapeMismatch {
            expected: "2".into(),
            got: body.dim().to_string(),
            context: "support polygon",
        });
    }
    let n = k.max(8);
    let mut cuts = Vec::with_capacity(n);
    for i in 0..n {
        let a = (R::of_usize(i) + R::half()) * R::two() * R::pi() / R::of_usize(n);
        let u = [a.cos(), a.sin()];
        let h = body.support(&[u[0], u[1]]);
        if !h.is_finite() {
            return Err(Error::Unsupported("support not evaluable for the polygon sketch".into()));
        }
        cuts.push((u, h));
    }
    halfplanes_to_polygon(&cuts, tol)
}

/// Area of a 2D convex body from circumscribed polygons at two resolutions;
/// the gap between them is the error estimate (circumscribed areas decrease
/// monotonically in the direction count).
pub fn support_area_2d<R: Real>(body: &Body<R>, k: usize, tol: &Tol<R>) -> Result<Estimate<R>> {
    let fine = polygon_area(&support_polygon(body, k, tol)?);
    let coarse = polygon_area(&support_polygon(body, (k / 2).max(8), tol)?);
    Ok(Estimate { value: fine, stderr: (coarse - fine).abs() })
}

/// Width of the shadow (orthogonal projection onto v⊥) of a polytope;
/// the brute-force side of the Cauchy projection formula.
pub fn shadow_volume<R: Real>(k: &Body<R>, v: &[R], tol: &Tol<R>) -> Result<R> {
    let d = k.dim();
    let verts = k
        .vertices()
        .ok_or_else(|| Error::Unsupported("shadow computed from vertices only".into()))?;
    let nv = norm(v);
    if (nv - R::one()).abs() > R::of(1e-9) {
        return Err(Error::Parameter("direction must be unit".into()));
    }
    match d {
        2 => {
            let t = rot90(v);
            let proj: Vec<R> = verts.iter().map(|x| dot(x, &t)).collect();
            let hi = proj.iter().cloned().fold(R::neg_infinity(), R::max);
            let lo = proj.iter().cloned().fold(R::infinity(), R::min);
            Ok(hi - lo)
        }
        3 => {
            // Orthonormal basis of v⊥.
            let seed = if v[0].abs() < R::of(0.9) { [R::one(), R::zero(), R::zero()] } else { [R::zero(), R::one(), R::zero()] };
            let mut e1 = [R::zero(); 3];
            let sv = dot(&seed, v);
            for i in 0..3 {
                e1[i] = seed[i] - sv * v[i];
            }
            let n1 = norm(&e1);
            for x in e1.iter_mut() {
                *x /= n1;
            }
            let e2 = [
                v[1] * e1[2] - v[2] * e1[1],
                v[2] * e1[0] - v[0] * e1[2],
                v[0] * e1[1] - v[1] * e1[0],
            ];
            let pts: Vec<[R; 2]> = verts.iter().map(|x| [dot(x, &e1), dot(x, &e2)]).collect();
            let hull = convex_hull_2d(&pts, tol)?;
            Ok(polygon_area(&hull))
        }
        _ => Err(Error::Unsupported("shadow only in dim 2 or 3".into())),
    }
}

/// Helper for tests and suites: shape of the flattened space R^d as M[d,1].
pub fn column_shape(d: usize) -> MatShape {
    MatShape::of(d, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;
    use crate::rng::SeedSplitter;
    use rand::Rng;

    fn tol() -> Tol<f64> {
        Tol::default()
    }

    fn random_polygon(seed: u64, k: usize) -> Body<f64> {
        let split = SeedSplitter::new(seed);
        let mut rng = split.stream("test.polygon");
        let shape = MatShape::of(2, 1);
        let pts: Vec<Vec<f64>> = (0..k)
            .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        Body::polytope(shape, pts).unwrap()
    }

    #[test]
    fn square_surface_measure_atoms() {
        let sq: Body<f64> = Body::cube(MatShape::of(2, 1), 1.0).unwrap();
        let sigma = surface_measure(&sq, &tol()).unwrap();
        assert_eq!(sigma.atoms.len(), 4);
        for (u, w) in &sigma.atoms {
            assert!((w - 2.0).abs() < 1e-12);
            assert!((u[0].abs() - 1.0).abs() < 1e-12 || (u[1].abs() - 1.0).abs() < 1e-12);
        }
        let c = sigma.center_of_mass();
        assert!(norm(&c) < 1e-12);
    }

    #[test]
    fn triangle_surface_measure_matches_edges() {
        let t: Body<f64> = Body::polytope(
            MatShape::of(2, 1),
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let sigma = surface_measure(&t, &tol()).unwrap();
        assert_eq!(sigma.atoms.len(), 3);
        let mut found_diag = false;
        for (u, w) in &sigma.atoms {
            if u[0] > 0.5 && u[1] > 0.5 {
                found_diag = true;
                assert!((u[0] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
                assert!((w - 2f64.sqrt()).abs() < 1e-12);
            } else {
                assert!((w - 1.0).abs() < 1e-12);
            }
        }
        assert!(found_diag);
    }

    #[test]
    fn lp_weights_scale_by_support_power() {
        let sq: Body<f64> = Body::cube(MatShape::of(2, 1), 2.0).unwrap();
        let sigma = lp_surface_measure(&sq, 2.0, 64, &tol()).unwrap();
        for (_, w) in &sigma.atoms {
            // edge length 4, h = 2, weight 4·2^{-1} = 2
            assert!((w - 2.0).abs() < 1e-12);
        }
        // origin on the boundary is rejected for p > 1
        let shifted: Body<f64> = Body::polytope(
            MatShape::of(2, 1),
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert!(matches!(
            lp_surface_measure(&shifted, 2.0, 64, &tol()),
            Err(Error::LpMeasureUndefined(_))
        ));
    }

    #[test]
    fn surface_measure_centering_random() {
        for seed in 0..10u64 {
            let poly = random_polygon(seed, 12);
            let sigma = surface_measure(&poly, &tol()).unwrap();
            assert!(norm(&sigma.center_of_mass()) < 1e-9, "seed {seed}");
        }
        // 3D
        let split = SeedSplitter::new(77);
        let mut rng = split.stream("test.cloud3");
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0f64)).collect())
            .collect();
        let body: Body<f64> = Body::polytope(MatShape::of(3, 1), pts).unwrap();
        let sigma = surface_measure(&body, &tol()).unwrap();
        assert!(norm(&sigma.center_of_mass()) < 1e-9);
    }

    #[test]
    fn cauchy_projection_consistency() {
        // (1/2)∫|⟨u,v⟩| dσ_K(u) = shadow of K on v⊥, in 2D and 3D.
        let split = SeedSplitter::new(3);
        let mut rng = split.stream("test.cauchy");
        for seed in 0..5u64 {
            let poly = random_polygon(100 + seed, 9);
            let sigma = surface_measure(&poly, &tol()).unwrap();
            for _ in 0..4 {
                let v: Vec<f64> = crate::rng::uniform_direction(&mut rng, 2);
                let lhs: f64 =
                    0.5 * sigma.atoms.iter().map(|(u, w)| w * dot(u, &v).abs()).sum::<f64>();
                let rhs = shadow_volume(&poly, &v, &tol()).unwrap();
                assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0), "{lhs} vs {rhs}");
            }
        }
        let pts: Vec<Vec<f64>> = (0..16)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0f64)).collect())
            .collect();
        let body: Body<f64> = Body::polytope(MatShape::of(3, 1), pts).unwrap();
        let sigma = surface_measure(&body, &tol()).unwrap();
        for _ in 0..4 {
            let v: Vec<f64> = crate::rng::uniform_direction(&mut rng, 3);
            let lhs: f64 = 0.5 * sigma.atoms.iter().map(|(u, w)| w * dot(u, &v).abs()).sum::<f64>();
            let rhs = shadow_volume(&body, &v, &tol()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn mixed_volume_hand_values() {
        let sq: Body<f64> = Body::cube(MatShape::of(2, 1), 1.0).unwrap();
        let v_kk = lp_mixed_volume(&sq, &sq, 1.0, 64, &tol()).unwrap();
        assert!((v_kk - 4.0).abs() < 1e-12);
        let disk: Body<f64> = Body::ball(MatShape::of(2, 1), 1.0).unwrap();
        let v_kb = lp_mixed_volume(&sq, &disk, 1.0, 64, &tol()).unwrap();
        assert!((v_kb - 4.0).abs() < 1e-12); // (1/2)·perimeter·1
        // homogeneity in L: V_p(K, λL) = λ^p V_p(K, L)
        let disk3 = Body::ball(MatShape::of(2, 1), 3.0).unwrap();
        let v3 = lp_mixed_volume(&sq, &disk3, 2.0, 64, &tol()).unwrap();
        let v1 = lp_mixed_volume(&sq, &disk, 2.0, 64, &tol()).unwrap();
        assert!((v3 - 9.0 * v1).abs() < 1e-12);
    }

    #[test]
    fn lp_minkowski_first_inequality_sampled() {
        // V_p(K,L)^d ≥ vol(K)^{d−p} vol(L)^p
        for seed in 0..10u64 {
            let k = random_polygon(200 + seed, 8);
            let l = random_polygon(300 + seed, 8);
            // recenter L so its support is positive (K's measure needs nothing;
            // for p>1 K must contain the origin, so recenter it too)
            let ck = centroid(&k, &tol()).unwrap();
            let cl = centroid(&l, &tol()).unwrap();
            let k = k.translate(&ck.iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
            let l = l.translate(&cl.iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
            for p in [1.0, 2.0] {
                let vp = lp_mixed_volume(&k, &l, p, 64, &tol()).unwrap();
                let vk = volume(&k, &VolumeMethod::Exact, &tol()).unwrap().value;
                let vl = volume(&l, &VolumeMethod::Exact, &tol()).unwrap().value;
                let lhs = vp.powi(2);
                let rhs = vk.powf(2.0 - p) * vl.powf(p);
                assert!(lhs >= rhs * (1.0 - 1e-9), "seed {seed} p {p}: {lhs} < {rhs}");
            }
        }
    }

    #[test]
    fn dual_mixed_volume_closed_forms() {
        let quad = SphereQuadrature::product(2, 512).unwrap();
        let b: Body<f64> = Body::ball(MatShape::of(2, 1), 1.0).unwrap();
        let v = dual_mixed_volume(&b, &b, 2.0, &quad, &tol()).unwrap();
        assert!((v.value - std::f64::consts::PI).abs() < 1e-12);
        let b2 = Body::ball(MatShape::of(2, 1), 2.0).unwrap();
        let v2 = dual_mixed_volume(&b, &b2, 1.0, &quad, &tol()).unwrap();
        assert!((v2.value - std::f64::consts::PI / 2.0).abs() < 1e-12);
        let bq = Body::ball(MatShape::of(2, 1), 0.25).unwrap();
        let v4 = dual_mixed_volume(&b, &bq, 1.0, &quad, &tol()).unwrap();
        assert!((v4.value - 4.0 * std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn dual_mixed_volume_diagonal_is_volume() {
        let quad = SphereQuadrature::product(2, 2048).unwrap();
        for seed in 0..8u64 {
            let poly = random_polygon(400 + seed, 10);
            let c = centroid(&poly, &tol()).unwrap();
            let poly = poly.translate(&c.iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
            let vol_exact = volume(&poly, &VolumeMethod::Exact, &tol()).unwrap().value;
            let est = dual_mixed_volume(&poly, &poly, 1.5, &quad, &tol()).unwrap();
            let gap = (est.value - vol_exact).abs();
            assert!(
                gap <= (3.0 * est.stderr).max(1e-6 * vol_exact),
                "seed {seed}: {} vs {vol_exact} (σ {})",
                est.value,
                est.stderr
            );
        }
    }

    #[test]
    fn dual_minkowski_first_inequality_sampled() {
        // vol(K)^{d+p} vol(L)^{-p} ≤ Ṽ_{-p,d}(K,L)^d
        let quad = SphereQuadrature::product(2, 2048).unwrap();
        for seed in 0..8u64 {
            let k = random_polygon(500 + seed, 9);
            let l = random_polygon(600 + seed, 9);
            let ck = centroid(&k, &tol()).unwrap();
            let cl = centroid(&l, &tol()).unwrap();
            let k = k.translate(&ck.iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
            let l = l.translate(&cl.iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
            let p = 1.5;
            let vt = dual_mixed_volume(&k, &l, p, &quad, &tol()).unwrap();
            let vk = volume(&k, &VolumeMethod::Exact, &tol()).unwrap().value;
            let vl = volume(&l, &VolumeMethod::Exact, &tol()).unwrap().value;
            let lhs = vk.powf(2.0 + p) * vl.powf(-p);
            let rhs = vt.value.powi(2);
            assert!(lhs <= rhs * (1.0 + 1e-6) + 3.0 * vt.stderr, "seed {seed}");
        }
    }

    #[test]
    fn volume_methods_agree() {
        let cube: Body<f64> = Body::cube(MatShape::of(3, 1), 1.0).unwrap();
        let exact = volume(&cube, &VolumeMethod::Exact, &tol()).unwrap();
        assert!((exact.value - 8.0).abs() < 1e-12);
        let quad = SphereQuadrature::product(3, 4096).unwrap();
        let radial = volume(&cube, &VolumeMethod::PolarFormula(&quad), &tol()).unwrap();
        assert!(
            (radial.value - 8.0).abs() <= (3.0 * radial.stderr).max(0.02),
            "{} σ {}",
            radial.value,
            radial.stderr
        );
        let mc = volume(
            &cube,
            &VolumeMethod::McMembership { samples: 40_000, seed: 9, half_widths: vec![1.5; 3] },
            &tol(),
        )
        .unwrap();
        assert!((mc.value - 8.0).abs() <= 3.0 * mc.stderr + 0.05);

        let disk: Body<f64> = Body::ball(MatShape::of(2, 1), 1.0).unwrap();
        let q2 = SphereQuadrature::product(2, 64).unwrap();
        let v = volume(&disk, &VolumeMethod::PolarFormula(&q2), &tol()).unwrap();
        assert!((v.value - std::f64::consts::PI).abs() < 1e-12);
        assert!(v.stderr < 1e-13); // constant integrand: companion agrees
    }

    #[test]
    fn mc_volume_cross_polytope_4d() {
        let cross: Body<f64> = Body::cross(MatShape::of(4, 1), 1.0).unwrap();
        let est = volume(
            &cross,
            &VolumeMethod::McMembership { samples: 200_000, seed: 4, half_widths: vec![1.0; 4] },
            &tol(),
        )
        .unwrap();
        let want = 16.0 / 24.0; // 2^4/4!
        assert!(
            (est.value - want).abs() <= 3.0 * est.stderr,
            "{} vs {want} (σ {})",
            est.value,
            est.stderr
        );
        // missing box dimensions rejected
        assert!(volume(
            &cross,
            &VolumeMethod::McMembership { samples: 10, seed: 4, half_widths: vec![1.0; 3] },
            &tol()
        )
        .is_err());
    }

    #[test]
    fn exact_volume_of_images() {
        let ball: Body<f64> = Body::ball(MatShape::of(2, 2), 1.0).unwrap();
        let a = crate::geom::SmallMat::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]);
        let img = ball.transform_left(&a, &tol()).unwrap();
        let v = volume(&img, &VolumeMethod::Exact, &tol()).unwrap().value;
        // vol(A.D) = |det A|^m vol(D), m = 2
        let base = unit_ball_volume::<f64>(4);
        assert!((v - 4.0 * base).abs() < 1e-12);
    }

    #[test]
    fn centroid_values_and_equivariance() {
        let sq: Body<f64> = Body::cube(MatShape::of(2, 1), 1.0).unwrap();
        let c = centroid(&sq, &tol()).unwrap();
        assert!(norm(&c) < 1e-12);
        let t = sq.translate(&[0.25, -0.5]).unwrap();
        let ct = centroid(&t, &tol()).unwrap();
        assert!((ct[0] - 0.25).abs() < 1e-12 && (ct[1] + 0.5).abs() < 1e-12);
        // MC centroid agrees loosely
        let cmc = centroid_mc(&t, 60_000, 11, &[2.0, 2.0], &tol()).unwrap();
        assert!((cmc[0] - 0.25).abs() < 0.02 && (cmc[1] + 0.5).abs() < 0.02);
    }

    #[test]
    fn santalo_point_of_offset_ball() {
        let ball: Body<f64> = Body::ball(MatShape::of(2, 1), 1.0).unwrap();
        let shifted = ball.translate(&[0.3, 0.0]).unwrap();
        let quad = SphereQuadrature::product(2, 1024).unwrap();
        let res = santalo_point(&shifted, &quad, &tol()).unwrap();
        assert!((res.point[0] - 0.3).abs() < 1e-4, "{:?}", res.point);
        assert!(res.point[1].abs() < 1e-6);
        assert!((res.polar_volume.value - std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn santalo_point_of_triangle_vs_grid_oracle() {
        let t: Body<f64> = Body::polytope(
            MatShape::of(2, 1),
            vec![vec![-0.4, -0.3], vec![0.6, -0.3], vec![-0.4, 0.7]],
        )
        .unwrap();
        let quad = SphereQuadrature::product(2, 2048).unwrap();
        let res = santalo_point(&t, &quad, &tol()).unwrap();
        // independent oracle: brute grid over the interior
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for i in 0..60 {
            for j in 0..60 {
                let s = [-0.39 + 0.0165 * i as f64, -0.29 + 0.0165 * j as f64];
                if let Ok(v) = polar_volume_about(&t, &s, &quad) {
                    if v.value < best.0 {
                        best = (v.value, s);
                    }
                }
            }
        }
        assert!(
            (res.point[0] - best.1[0]).abs() < 0.02 && (res.point[1] - best.1[1]).abs() < 0.02,
            "descent {:?} vs grid {:?}",
            res.point,
            best.1
        );
        assert!(res.polar_volume.value <= best.0 + 1e-9);
        // classical Santaló: vol(K)·vol((K−s)°) ≤ ω₂² = π²
        let vk = volume(&t, &VolumeMethod::Exact, &tol()).unwrap().value;
        assert!(vk * res.polar_volume.value <= std::f64::consts::PI.powi(2));
    }

    #[test]
    fn support_polygon_outer_approximation() {
        let disk: Body<f64> = Body::ball(MatShape::of(2, 1), 1.0).unwrap();
        let est = support_area_2d(&disk, 512, &tol()).unwrap();
        let pi = std::f64::consts::PI;
        assert!(est.value >= pi && est.value - pi < 1e-4);
        assert!(est.stderr >= est.value - pi);
        // Polytopes overshoot at edge midpoints (no cut direction hits the
        // facet normals exactly): extra area ≈ 4·tan(π/k), covered by the
        // companion gap.
        let sq: Body<f64> = Body::cube(MatShape::of(2, 1), 1.0).unwrap();
        let a = support_area_2d(&sq, 256, &tol()).unwrap();
        let overshoot = a.value - 4.0;
        assert!(overshoot >= 0.0 && overshoot < 0.06, "overshoot {overshoot}");
        assert!(a.stderr >= overshoot * 0.9, "error model too small: {} vs {overshoot}", a.stderr);
    }
}
