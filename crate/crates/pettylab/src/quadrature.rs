//! Sphere quadrature with per-scheme error models.
//!
//! - `product`: exact-degree tensor rules on S⁰, S¹, S² (uniform angles /
//!   Gauss–Legendre × uniform). Error model: difference against an embedded
//!   half-resolution companion rule (conservative for the O(N⁻²) regimes the
//!   suites hit).
//! - `low_discrepancy`: Halton points under seeded Cranley–Patterson shifts,
//!   mapped through the Gaussian normalization; 8 independent replicates give
//!   the standard error.
//! - `monte_carlo`: plain seeded sampling, same replicate layout.
//!
//! Weights always sum to the surface area d·ω_d of S^{d-1}.

use crate::bodies::{radical_inverse, PRIMES};
use crate::error::{Error, Result};
use crate::geom::norm;
use crate::rng::SeedSplitter;
use crate::scalar::{inv_std_normal, unit_sphere_area, Real};
use serde::{Deserialize, Serialize};

pub const REPLICATES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ProductRule,
    LowDiscrepancy,
    MonteCarlo,
}

/// An estimate with a standard error. `stderr = 0` marks exact values;
/// product-rule integrals carry the companion-rule discrepancy instead.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Estimate<R> {
    pub value: R,
    pub stderr: R,
}

impl<R: Real> Estimate<R> {
    pub fn exact(value: R) -> Self {
        Estimate { value, stderr: R::zero() }
    }

    pub fn scale(self, c: R) -> Self {
        Estimate { value: self.value * c, stderr: self.stderr * c.abs() }
    }

    /// x ↦ x^a with first-order error propagation.
    pub fn powf(self, a: R) -> Self {
        let v = self.value.powf(a);
        let deriv = a * self.value.powf(a - R::one());
        Estimate { value: v, stderr: (deriv * self.stderr).abs() }
    }

    /// Product of independent estimates.
    pub fn mul(self, other: Estimate<R>) -> Self {
        let v = self.value * other.value;
        let s = ((self.stderr * other.value).powi(2) + (other.stderr * self.value).powi(2)).sqrt();
        Estimate { value: v, stderr: s }
    }

    /// Quotient of independent estimates.
    pub fn div(self, other: Estimate<R>) -> Self {
        let v = self.value / other.value;
        let rel = ((self.stderr / self.value).powi(2) + (other.stderr / other.value).powi(2)).sqrt();
        Estimate { value: v, stderr: (v * rel).abs() }
    }

    /// σ of the difference `self - other` (independent).
    pub fn diff_sigma(self, other: Estimate<R>) -> R {
        (self.stderr.powi(2) + other.stderr.powi(2)).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct SphereQuadrature<R> {
    /// Ambient dimension d (nodes live on S^{d-1}).
    pub dim: usize,
    pub scheme: Scheme,
    /// Construction size parameter (total node budget requested).
    pub size: usize,
    /// Seed used for the stochastic schemes (0 for product rules).
    pub seed: u64,
    pub nodes: Vec<Vec<R>>,
    pub weights: Vec<R>,
    /// Half-resolution companion (product rules only), for the error model.
    coarse: Option<Box<SphereQuadrature<R>>>,
}

impl<R: Real> SphereQuadrature<R> {
    /// Exact-degree product rule; available for d ∈ {1, 2, 3}.
    pub fn product(d: usize, size: usize) -> Result<Self> {
        let built = Self::product_nodes(d, size)?;
        let coarse_size = match d {
            1 => 0,
            _ => (size / 2).max(8),
        };
        let coarse = if coarse_size >= 8 && size >= 16 {
            Some(Box::new(Self::product_nodes(d, coarse_size)?))
        } else {
            None
        };
        Ok(SphereQuadrature { coarse, ..built })
    }

    fn product_nodes(d: usize, size: usize) -> Result<Self> {
        let area = unit_sphere_area::<R>(d);
        let (nodes, weights): (Vec<Vec<R>>, Vec<R>) = match d {
            1 => (
                vec![vec![R::one()], vec![-R::one()]],
                vec![R::one(), R::one()],
            ),
            2 => {
                let n = size.max(4);
                let w = R::two() * R::pi() / R::of_usize(n);
                let mut nodes = Vec::with_capacity(n);
                for i in 0..n {
                    let a = (R::of_usize(i) + R::half()) * R::two() * R::pi() / R::of_usize(n);
                    nodes.push(vec![a.cos(), a.sin()]);
                }
                (nodes, vec![w; n])
            }
            3 => {
                // K Gauss-Legendre nodes in z, 2K uniform azimuths.
                let k = ((size as f64 / 2.0).sqrt().ceil() as usize).max(4);
                let gl = gauss_legendre::<R>(k);
                let na = 2 * k;
                let wphi = R::two() * R::pi() / R::of_usize(na);
                let mut nodes = Vec::with_capacity(k * na);
                let mut weights = Vec::with_capacity(k * na);
                for (z, wz) in &gl {
                    let r = (R::one() - *z * *z).max(R::zero()).sqrt();
                    for a in 0..na {
                        let phi = (R::of_usize(a) + R::half()) * R::two() * R::pi() / R::of_usize(na);
                        nodes.push(vec![r * phi.cos(), r * phi.sin(), *z]);
                        weights.push(*wz * wphi);
                    }
                }
                (nodes, weights)
            }
            _ => {
                return Err(Error::Parameter(format!(
                    "product rule only for d <= 3, got {d}; use low_discrepancy"
                )))
            }
        };
        debug_assert!({
            let s: R = weights.iter().copied().sum();
            (s - area).abs() < R::of(1e-9) * area
        });
        Ok(SphereQuadrature {
            dim: d,
            scheme: Scheme::ProductRule,
            size,
            seed: 0,
            nodes,
            weights,
            coarse: None,
        })
    }

    /// Seeded Halton points with Cranley–Patterson shifts, Gaussian-normalized
    /// onto the sphere; `REPLICATES` independent shift groups.
    pub fn low_discrepancy(d: usize, n: usize, seed: u64) -> Result<Self> {
        if d > PRIMES.len() {
            return Err(Error::Parameter(format!(
                "low-discrepancy sphere points built for d <= {}, got {d}",
                PRIMES.len()
            )));
        }
        use rand::Rng;
        let split = SeedSplitter::new(seed);
        let per = (n / REPLICATES).max(16);
        let total = per * REPLICATES;
        let area = unit_sphere_area::<R>(d);
        let w = area / R::of_usize(total);
        let mut nodes = Vec::with_capacity(total);
        for rep in 0..REPLICATES {
            let mut rng = split.substream("quad.shift", rep as u64);
            let shift: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
            for i in 0..per {
                let mut v: Vec<R> = Vec::with_capacity(d);
                for (j, p) in PRIMES.iter().take(d).enumerate() {
                    let u = (radical_inverse(i + 1, *p) + shift[j]).fract();
                    v.push(inv_std_normal(R::of(u)));
                }
                let nrm = norm(&v);
                if nrm > R::of(1e-12) {
                    nodes.push(crate::geom::scaled(&v, nrm.recip()));
                } else {
                    let mut e = vec![R::zero(); d];
                    e[0] = R::one();
                    nodes.push(e);
                }
            }
        }
        Ok(SphereQuadrature {
            dim: d,
            scheme: Scheme::LowDiscrepancy,
            size: n,
            seed,
            weights: vec![w; nodes.len()],
            nodes,
            coarse: None,
        })
    }

    /// Plain seeded Monte Carlo directions (same replicate layout).
    pub fn monte_carlo(d: usize, n: usize, seed: u64) -> Self {
        let split = SeedSplitter::new(seed);
        let per = (n / REPLICATES).max(16);
        let total = per * REPLICATES;
        let area = unit_sphere_area::<R>(d);
        let w = area / R::of_usize(total);
        let mut nodes = Vec::with_capacity(total);
        for rep in 0..REPLICATES {
            let mut rng = split.substream("quad.mc", rep as u64);
            for _ in 0..per {
                nodes.push(crate::rng::uniform_direction(&mut rng, d));
            }
        }
        SphereQuadrature {
            dim: d,
            scheme: Scheme::MonteCarlo,
            size: n,
            seed,
            weights: vec![w; nodes.len()],
            nodes,
            coarse: None,
        }
    }

    /// Product rule when available, low-discrepancy otherwise.
    pub fn auto(d: usize, size: usize, seed: u64) -> Result<Self> {
        if d <= 3 {
            Self::product(d, size)
        } else {
            Self::low_discrepancy(d, size, seed)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_{S^{d-1}} f dθ with the scheme's error model.
    pub fn integrate<F: Fn(&[R]) -> R>(&self, f: F) -> Estimate<R> {
        match self.scheme {
            Scheme::ProductRule => {
                let mut s = R::zero();
                for (x, w) in self.nodes.iter().zip(&self.weights) {
                    s += *w * f(x);
                }
                let err = match &self.coarse {
                    Some(c) => {
                        let mut sc = R::zero();
                        for (x, w) in c.nodes.iter().zip(&c.weights) {
                            sc += *w * f(x);
                        }
                        (s - sc).abs()
                    }
                    None => R::zero(),
                };
                Estimate { value: s, stderr: err }
            }
            Scheme::LowDiscrepancy | Scheme::MonteCarlo => {
                let per = self.nodes.len() / REPLICATES;
                let mut means = Vec::with_capacity(REPLICATES);
                for rep in 0..REPLICATES {
                    let mut s = R::zero();
                    for i in rep * per..(rep + 1) * per {
                        s += self.weights[i] * f(&self.nodes[i]);
                    }
                    means.push(s * R::of_usize(REPLICATES));
                }
                let k = R::of_usize(REPLICATES);
                let mean: R = means.iter().copied().sum::<R>() / k;
                let var: R = means
                    .iter()
                    .map(|&m| (m - mean) * (m - mean))
                    .sum::<R>()
                    / (k - R::one());
                Estimate { value: mean, stderr: (var / k).sqrt() }
            }
        }
    }
}

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre<R: Real>(k: usize) -> Vec<(R, R)> {
    let mut out = Vec::with_capacity(k);
    let kf = k as f64;
    for i in 0..k {
        // Chebyshev-like initial guess, then Newton on P_k.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(k, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(k, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((R::of(x), R::of(w)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_and_deriv(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

// ------------------------------------------------------------ JSON cache

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureJson {
    pub dim: usize,
    pub scheme: Scheme,
    pub size: usize,
    pub seed: u64,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl QuadratureJson {
    pub fn from_quadrature(q: &SphereQuadrature<f64>) -> Self {
        QuadratureJson {
            dim: q.dim,
            scheme: q.scheme,
            size: q.size,
            seed: q.seed,
            nodes: q.nodes.clone(),
            weights: q.weights.clone(),
        }
    }

    /// Rebuild through the constructor (restoring the error-model companion)
    /// and verify the cache matches bit-for-bit.
    pub fn to_quadrature(&self) -> Result<SphereQuadrature<f64>> {
        let q = match self.scheme {
            Scheme::ProductRule => SphereQuadrature::product(self.dim, self.size)?,
            Scheme::LowDiscrepancy => {
                SphereQuadrature::low_discrepancy(self.dim, self.size, self.seed)?
            }
            Scheme::MonteCarlo => SphereQuadrature::monte_carlo(self.dim, self.size, self.seed),
        };
        if q.nodes != self.nodes || q.weights != self.weights {
            return Err(Error::Config(
                "quadrature cache does not match its construction parameters".into(),
            ));
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_rule_is_exact_for_trig_polys() {
        let q: SphereQuadrature<f64> = SphereQuadrature::product(2, 64).unwrap();
        let area = q.integrate(|_| 1.0);
        assert!((area.value - std::f64::consts::TAU).abs() < 1e-13);
        // ∫ cos²θ over S¹ = π, exactly integrated
        let c2 = q.integrate(|x| x[0] * x[0]);
        assert!((c2.value - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn circle_rule_kink_error_is_covered_by_model() {
        // |cos φ| integrates to 4; trapezoid error is O(N⁻²) and must be
        // bounded by the companion-rule discrepancy.
        let q: SphereQuadrature<f64> = SphereQuadrature::product(2, 512).unwrap();
        let est = q.integrate(|x| x[0].abs());
        let err = (est.value - 4.0).abs();
        assert!(err < 1e-4, "trapezoid error too large: {err}");
        assert!(est.stderr >= err, "error model underestimates: {} < {err}", est.stderr);
    }

    #[test]
    fn sphere_rule_total_area_and_moments() {
        let q: SphereQuadrature<f64> = SphereQuadrature::product(3, 2048).unwrap();
        let area = q.integrate(|_| 1.0);
        assert!((area.value - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        // ∫ z² = area/3 (degree-2 moment), exact for Gauss-Legendre
        let m2 = q.integrate(|x| x[2] * x[2]);
        assert!((m2.value - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        // ∫ |z| = 2π·∫|z|dz = 2π; GL is not exact on the kink (O(K⁻²)),
        // and the companion-rule error model must cover the miss.
        let m1 = q.integrate(|x| x[2].abs());
        let miss = (m1.value - 2.0 * std::f64::consts::PI).abs();
        assert!(miss < 1e-2, "GL kink error too large: {miss}");
        assert!(m1.stderr >= miss, "error model underestimates: {} < {miss}", m1.stderr);
    }

    #[test]
    fn s0_rule() {
        let q: SphereQuadrature<f64> = SphereQuadrature::product(1, 2).unwrap();
        assert_eq!(q.len(), 2);
        let total = q.integrate(|_| 1.0);
        assert!((total.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn low_discrepancy_moments_within_3_sigma() {
        let q: SphereQuadrature<f64> = SphereQuadrature::low_discrepancy(4, 4096, 11).unwrap();
        let area4 = 2.0 * std::f64::consts::PI * std::f64::consts::PI; // 4·ω₄
        let total = q.integrate(|_| 1.0);
        assert!((total.value - area4).abs() < 1e-10); // weights sum exactly
        // ∫ x₀² over S³ = area/4
        let m2 = q.integrate(|x| x[0] * x[0]);
        let want = area4 / 4.0;
        assert!(
            (m2.value - want).abs() <= 3.0 * m2.stderr + 1e-3,
            "moment {} vs {want}, σ={}",
            m2.value,
            m2.stderr
        );
        assert!(m2.stderr < 0.05, "LD stderr unexpectedly large: {}", m2.stderr);
    }

    #[test]
    fn monte_carlo_reproducible_and_stderr_sane() {
        let a: SphereQuadrature<f64> = SphereQuadrature::monte_carlo(6, 2048, 5);
        let b: SphereQuadrature<f64> = SphereQuadrature::monte_carlo(6, 2048, 5);
        assert_eq!(a.nodes, b.nodes);
        let est = a.integrate(|x| x[1] * x[1]);
        let area6 = 6.0 * crate::scalar::unit_ball_volume::<f64>(6);
        let want = area6 / 6.0;
        assert!((est.value - want).abs() <= 4.0 * est.stderr, "{} vs {want}", est.value);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre::<f64>(12);
        let total: f64 = gl.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-13);
        // ∫_{-1}^{1} x^{10} dx = 2/11, exact for K=12 ≥ (10+1)/2
        let m10: f64 = gl.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((m10 - 2.0 / 11.0).abs() < 1e-13);
    }

    #[test]
    fn cache_round_trip() {
        let q: SphereQuadrature<f64> = SphereQuadrature::low_discrepancy(4, 256, 3).unwrap();
        let j = QuadratureJson::from_quadrature(&q);
        let s = serde_json::to_string(&j).unwrap();
        let j2: QuadratureJson = serde_json::from_str(&s).unwrap();
        let q2 = j2.to_quadrature().unwrap();
        assert_eq!(q.nodes, q2.nodes);
        // corrupting a node is detected
        let mut bad = QuadratureJson::from_quadrature(&q);
        bad.nodes[0][0] += 1e-9;
        assert!(bad.to_quadrature().is_err());
    }
}
