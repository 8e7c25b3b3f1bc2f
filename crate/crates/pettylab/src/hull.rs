//! Convex hulls and polytope calculus in R² and R³.
//!
//! 2D: monotone-chain hull, shoelace area/centroid, edge normals, polygon
//! polarity, half-plane intersection (via duality), zonogon sums.
//! 3D: incremental hull producing oriented triangles, facet atoms with
//! coplanar merging, exact volume/centroid by signed decomposition.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tol::Tol;

// ---------------------------------------------------------------- 2D ----

#[inline]
fn cross2<R: Real>(o: [R; 2], a: [R; 2], b: [R; 2]) -> R {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull, counter-clockwise, first vertex = lexicographic minimum.
/// Collinear/duplicate points are dropped. Errors if the hull is flat.
pub fn convex_hull_2d<R: Real>(pts: &[[R; 2]], tol: &Tol<R>) -> Result<Vec<[R; 2]>> {
    if pts.len() < 3 {
        return Err(Error::Degenerate(format!("hull of {} points", pts.len())));
    }
    let mut p: Vec<[R; 2]> = pts.to_vec();
    p.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    p.dedup_by(|a, b| a[0] == b[0] && a[1] == b[1]);
    let scale = p
        .iter()
        .map(|q| q[0].abs().max(q[1].abs()))
        .fold(R::one(), R::max);
    let eps = tol.det * scale * scale;

    let build = |iter: &mut dyn Iterator<Item = [R; 2]>| {
        let mut chain: Vec<[R; 2]> = Vec::new();
        for q in iter {
            while chain.len() >= 2 && cross2(chain[chain.len() - 2], chain[chain.len() - 1], q) <= eps {
                chain.pop();
            }
            chain.push(q);
        }
        chain
    };
    let mut lower = build(&mut p.iter().copied());
    let mut upper = build(&mut p.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::Degenerate("all points nearly collinear".into()));
    }
    Ok(lower)
}

/// Signed area (positive for CCW).
pub fn polygon_area<R: Real>(poly: &[[R; 2]]) -> R {
    let mut s = R::zero();
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s * R::half()
}

pub fn polygon_centroid<R: Real>(poly: &[[R; 2]]) -> [R; 2] {
    let mut cx = R::zero();
    let mut cy = R::zero();
    let mut a = R::zero();
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let w = p[0] * q[1] - q[0] * p[1];
        a += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    // a = 2·area, so Σ(x_i+x_{i+1})w / (6·area) = cx / (3a).
    let three_a = R::of(3.0) * a;
    [cx / three_a, cy / three_a]
}

#[derive(Clone, Debug)]
pub struct Edge2<R> {
    /// Unit outward normal.
    pub normal: [R; 2],
    /// Edge length (the 1-dimensional facet area).
    pub len: R,
    /// Support value ⟨normal, edge point⟩.
    pub h: R,
}

/// Outward edge data of a CCW polygon.
pub fn polygon_edges<R: Real>(poly: &[[R; 2]]) -> Vec<Edge2<R>> {
    let mut out = Vec::with_capacity(poly.len());
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
        if len == R::zero() {
            continue;
        }
        let normal = [e[1] / len, -e[0] / len];
        out.push(Edge2 {
            normal,
            len,
            h: normal[0] * a[0] + normal[1] * a[1],
        });
    }
    out
}

/// Polar polygon P° of a CCW polygon with the origin strictly interior:
/// one vertex `u/h` per edge, in edge order.
pub fn polygon_polar<R: Real>(poly: &[[R; 2]], tol: &Tol<R>) -> Result<Vec<[R; 2]>> {
    let mut out = Vec::with_capacity(poly.len());
    for e in polygon_edges(poly) {
        if e.h <= tol.tiny {
            return Err(Error::PolarUndefined(
                "polygon support non-positive on an edge normal".into(),
            ));
        }
        out.push([e.normal[0] / e.h, e.normal[1] / e.h]);
    }
    Ok(out)
}

/// Intersection of half-planes ⟨x,u_i⟩ ≤ h_i (all h_i > 0, directions
/// spanning): computed as the polar of conv{u_i/h_i}.
pub fn halfplanes_to_polygon<R: Real>(cuts: &[([R; 2], R)], tol: &Tol<R>) -> Result<Vec<[R; 2]>> {
    let mut duals = Vec::with_capacity(cuts.len());
    for (u, h) in cuts {
        if *h <= tol.tiny {
            return Err(Error::PolarUndefined("half-plane with non-positive offset".into()));
        }
        duals.push([u[0] / *h, u[1] / *h]);
    }
    let hull = convex_hull_2d(&duals, tol)?;
    polygon_polar(&hull, tol)
}

/// Minkowski sum of 2D segments `[c_i - g_i, c_i + g_i]`: a zonogon.
/// Returns a CCW polygon. Zero generators contribute only to the center.
pub fn zonogon<R: Real>(segments: &[([R; 2], [R; 2])], tol: &Tol<R>) -> Result<Vec<[R; 2]>> {
    let mut center = [R::zero(), R::zero()];
    let mut gens: Vec<[R; 2]> = Vec::new();
    let mut scale = R::one();
    for (c, g) in segments {
        center[0] += c[0];
        center[1] += c[1];
        scale = scale.max(g[0].abs().max(g[1].abs()));
    }
    let eps = tol.tiny * scale;
    for (_, g) in segments {
        if g[0].abs() <= eps && g[1].abs() <= eps {
            continue;
        }
        // Normalize sign into the upper half-plane so angles sort cleanly.
        let flip = g[1] < R::zero() || (g[1] == R::zero() && g[0] < R::zero());
        gens.push(if flip { [-g[0], -g[1]] } else { *g });
    }
    if gens.len() < 2 {
        return Err(Error::Degenerate("zonogon needs two independent generators".into()));
    }
    gens.sort_by(|a, b| {
        a[1].atan2(a[0])
            .partial_cmp(&b[1].atan2(b[0]))
            .unwrap()
    });
    // Start at center - Σg (extreme point), walk +2g in angle order for one
    // chain, the opposite chain is the antipodal reflection.
    let mut start = center;
    for g in &gens {
        start[0] -= g[0];
        start[1] -= g[1];
    }
    let mut verts = vec![start];
    let mut cur = start;
    for g in &gens {
        cur = [cur[0] + g[0] + g[0], cur[1] + g[1] + g[1]];
        verts.push(cur);
    }
    // cur is now center + Σg; reflect the first chain for the way back.
    let k = verts.len();
    for i in 1..k - 1 {
        let v = verts[i];
        verts.push([
            center[0] + center[0] - v[0],
            center[1] + center[1] - v[1],
        ]);
    }
    // The chain walk may produce collinear triples if generators share an
    // angle; clean through the hull.
    convex_hull_2d(&verts, tol)
}

/// Exact polygon support function (max over vertices).
pub fn polygon_support<R: Real>(poly: &[[R; 2]], u: [R; 2]) -> R {
    poly.iter()
        .map(|v| v[0] * u[0] + v[1] * u[1])
        .fold(R::neg_infinity(), R::max)
}

// ---------------------------------------------------------------- 3D ----

#[derive(Clone, Debug)]
pub struct Hull3<R> {
    pub points: Vec<[R; 3]>,
    /// Oriented triangles (outward normals by winding).
    pub faces: Vec<[usize; 3]>,
}

#[inline]
fn sub3<R: Real>(a: [R; 3], b: [R; 3]) -> [R; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn cross3<R: Real>(a: [R; 3], b: [R; 3]) -> [R; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn dot3<R: Real>(a: [R; 3], b: [R; 3]) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn face_plane<R: Real>(p: &[[R; 3]], f: [usize; 3]) -> ([R; 3], R) {
    let n = cross3(sub3(p[f[1]], p[f[0]]), sub3(p[f[2]], p[f[0]]));
    (n, dot3(n, p[f[0]]))
}

/// Incremental convex hull. Errors when points are degenerate (flat).
pub fn convex_hull_3d<R: Real>(pts: &[[R; 3]], tol: &Tol<R>) -> Result<Hull3<R>> {
    if pts.len() < 4 {
        return Err(Error::Degenerate(format!("3d hull of {} points", pts.len())));
    }
    let points: Vec<[R; 3]> = pts.to_vec();
    let scale = points
        .iter()
        .map(|q| q[0].abs().max(q[1].abs()).max(q[2].abs()))
        .fold(R::one(), R::max);
    let eps = tol.coplanar * scale * scale * scale.max(R::one());

    // Seed simplex: spread-out quadruple.
    let i0 = 0;
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            let da = dot3(sub3(points[a], points[i0]), sub3(points[a], points[i0]));
            let db = dot3(sub3(points[b], points[i0]), sub3(points[b], points[i0]));
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    let i2 = (0..points.len())
        .max_by(|&a, &b| {
            let ca = cross3(sub3(points[i1], points[i0]), sub3(points[a], points[i0]));
            let cb = cross3(sub3(points[i1], points[i0]), sub3(points[b], points[i0]));
            dot3(ca, ca).partial_cmp(&dot3(cb, cb)).unwrap()
        })
        .unwrap();
    let base_n = cross3(sub3(points[i1], points[i0]), sub3(points[i2], points[i0]));
    if dot3(base_n, base_n).sqrt() <= eps {
        return Err(Error::Degenerate("points nearly collinear".into()));
    }
    let i3 = (0..points.len())
        .max_by(|&a, &b| {
            let da = dot3(base_n, sub3(points[a], points[i0])).abs();
            let db = dot3(base_n, sub3(points[b], points[i0])).abs();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    if dot3(base_n, sub3(points[i3], points[i0])).abs() <= eps {
        return Err(Error::Degenerate("points nearly coplanar".into()));
    }

    let mut faces: Vec<[usize; 3]> = if dot3(base_n, sub3(points[i3], points[i0])) > R::zero() {
        vec![[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    } else {
        vec![[i0, i1, i2], [i1, i0, i3], [i2, i1, i3], [i0, i2, i3]]
    };

    let seed = [i0, i1, i2, i3];
    for p in 0..points.len() {
        if seed.contains(&p) {
            continue;
        }
        let x = points[p];
        let mut visible = vec![false; faces.len()];
        let mut any = false;
        for (fi, f) in faces.iter().enumerate() {
            let (n, off) = face_plane(&points, *f);
            let nn = dot3(n, n).sqrt();
            if dot3(n, x) - off > eps.max(tol.coplanar * scale * nn) {
                visible[fi] = true;
                any = true;
            }
        }
        if !any {
            continue;
        }
        // Horizon: directed edges of visible faces whose reverse edge is not
        // in another visible face.
        use std::collections::HashSet;
        let mut vis_edges: HashSet<(usize, usize)> = HashSet::new();
        for (fi, f) in faces.iter().enumerate() {
            if visible[fi] {
                for k in 0..3 {
                    vis_edges.insert((f[k], f[(k + 1) % 3]));
                }
            }
        }
        let mut new_faces: Vec<[usize; 3]> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            if visible[fi] {
                for k in 0..3 {
                    let e = (f[k], f[(k + 1) % 3]);
                    if !vis_edges.contains(&(e.1, e.0)) {
                        new_faces.push([e.0, e.1, p]);
                    }
                }
            }
        }
        let mut kept: Vec<[usize; 3]> = faces
            .iter()
            .enumerate()
            .filter(|(fi, _)| !visible[*fi])
            .map(|(_, f)| *f)
            .collect();
        kept.extend(new_faces);
        faces = kept;
    }

    Ok(Hull3 { points, faces })
}

#[derive(Clone, Debug)]
pub struct Facet3<R> {
    /// Unit outward normal.
    pub normal: [R; 3],
    /// Total (merged) facet area.
    pub area: R,
    /// Support value ⟨normal, facet point⟩.
    pub h: R,
}

/// Facet atoms with coplanar triangles merged (same unit normal and offset
/// within tolerance). Degenerate slivers are dropped.
pub fn hull3_facets<R: Real>(hull: &Hull3<R>, tol: &Tol<R>) -> Vec<Facet3<R>> {
    let scale = hull
        .points
        .iter()
        .map(|q| q[0].abs().max(q[1].abs()).max(q[2].abs()))
        .fold(R::one(), R::max);
    let mut groups: Vec<Facet3<R>> = Vec::new();
    for f in &hull.faces {
        let (n, _) = face_plane(&hull.points, *f);
        let nn = dot3(n, n).sqrt();
        if nn <= tol.tiny * scale * scale {
            continue;
        }
        let unit = [n[0] / nn, n[1] / nn, n[2] / nn];
        let area = nn * R::half();
        let h = dot3(unit, hull.points[f[0]]);
        let mut placed = false;
        for g in groups.iter_mut() {
            if dot3(g.normal, unit) > R::one() - tol.coplanar
                && (g.h - h).abs() <= tol.coplanar * scale.max(R::one())
            {
                g.area += area;
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(Facet3 { normal: unit, area, h });
        }
    }
    groups
}

/// Volume by the divergence theorem: (1/3) Σ area·⟨n, x_face⟩.
pub fn hull3_volume<R: Real>(hull: &Hull3<R>) -> R {
    let mut s = R::zero();
    for f in &hull.faces {
        let (n, off) = face_plane(&hull.points, *f);
        let _ = n;
        s += off * R::half(); // off = ⟨n_raw, v0⟩, |n_raw| = 2·area
    }
    s / R::of(3.0)
}

/// Centroid by signed tetrahedra against the vertex mean.
pub fn hull3_centroid<R: Real>(hull: &Hull3<R>) -> [R; 3] {
    let k = R::of_usize(hull.points.len());
    let mut apex = [R::zero(); 3];
    for p in &hull.points {
        for j in 0..3 {
            apex[j] += p[j] / k;
        }
    }
    let mut vol = R::zero();
    let mut c = [R::zero(); 3];
    let quarter = R::of(0.25);
    for f in &hull.faces {
        let a = sub3(hull.points[f[0]], apex);
        let b = sub3(hull.points[f[1]], apex);
        let d = sub3(hull.points[f[2]], apex);
        let v = dot3(cross3(a, b), d) / R::of(6.0);
        vol += v;
        for j in 0..3 {
            let centroid_j = apex[j] + (a[j] + b[j] + d[j]) * quarter;
            c[j] += v * centroid_j;
        }
    }
    [c[0] / vol, c[1] / vol, c[2] / vol]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tol<f64> {
        Tol::default()
    }

    #[test]
    fn square_hull_and_area() {
        let pts = vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [0.0, 0.0], [0.5, 0.5]];
        let h = convex_hull_2d(&pts, &tol()).unwrap();
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 4.0).abs() < 1e-12);
        let c = polygon_centroid(&h);
        assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12);
        let edges = polygon_edges(&h);
        assert_eq!(edges.len(), 4);
        for e in edges {
            assert!((e.len - 2.0).abs() < 1e-12);
            assert!((e.h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_of_square_is_cross() {
        let sq = convex_hull_2d(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]], &tol()).unwrap();
        let polar = polygon_polar(&sq, &tol()).unwrap();
        // polar of [-1,1]² is the cross polytope |x|+|y| ≤ 1, area 2
        assert!((polygon_area(&polar) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn halfplane_intersection_recovers_square() {
        let cuts = vec![
            ([1.0, 0.0], 1.0),
            ([-1.0, 0.0], 1.0),
            ([0.0, 1.0], 1.0),
            ([0.0, -1.0], 1.0),
            // redundant cut further out
            ([std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2], 5.0),
        ];
        let poly = halfplanes_to_polygon(&cuts, &tol()).unwrap();
        assert!((polygon_area(&poly) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zonogon_of_axis_segments_is_square() {
        // [-1,1]e1 + [-1,1]e2 = [-1,1]², possibly shifted by centers.
        let z = zonogon(
            &[([0.5, 0.0], [1.0, 0.0]), ([0.0, -0.25], [0.0, 1.0])],
            &tol(),
        )
        .unwrap();
        assert_eq!(z.len(), 4);
        assert!((polygon_area(&z) - 4.0).abs() < 1e-12);
        let c = polygon_centroid(&z);
        assert!((c[0] - 0.5).abs() < 1e-12 && (c[1] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn cube_hull_volume_facets() {
        let mut pts = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        pts.push([0.0, 0.0, 0.0]); // interior point must not disturb anything
        let h = convex_hull_3d(&pts, &tol()).unwrap();
        assert!((hull3_volume(&h) - 8.0).abs() < 1e-10);
        let facets = hull3_facets(&h, &tol());
        assert_eq!(facets.len(), 6);
        for f in &facets {
            assert!((f.area - 4.0).abs() < 1e-10);
            assert!((f.h - 1.0).abs() < 1e-12);
        }
        let c = hull3_centroid(&h);
        assert!(c.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn random_point_cloud_hull_contains_all_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<[f64; 3]> = (0..60)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let h = convex_hull_3d(&pts, &tol()).unwrap();
        for p in &pts {
            for f in &h.faces {
                let (n, off) = face_plane(&h.points, *f);
                assert!(dot3(n, *p) <= off + 1e-9, "point outside hull face");
            }
        }
        // Euler check for a simplicial polytope: F = 2V_hull - 4.
        use std::collections::HashSet;
        let vused: HashSet<usize> = h.faces.iter().flatten().copied().collect();
        assert_eq!(h.faces.len(), 2 * vused.len() - 4);
    }

    #[test]
    fn tetra_volume_exact() {
        let pts = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let h = convex_hull_3d(&pts, &tol()).unwrap();
        assert!((hull3_volume(&h) - 1.0 / 6.0).abs() < 1e-14);
    }
}
