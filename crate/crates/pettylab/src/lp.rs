//! Small dense linear programming: min cᵗx s.t. Ax = b, x ≥ 0.
//!
//! Two-phase tableau simplex with Bland's rule (no cycling). Problem sizes
//! here are tiny — at most 8 equality rows and a few hundred columns — so a
//! dense tableau is the right tool. The main client is the V-polytope gauge
//! `min Σμ s.t. Vμ = x, μ ≥ 0`.

use crate::error::{Error, Result};
use crate::geom::SmallMat;
use crate::scalar::Real;
use crate::tol::Tol;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<R> {
    Optimal { value: R, x: Vec<R> },
    Infeasible,
    Unbounded,
}

/// Solve min cᵗx s.t. Ax = b, x ≥ 0 (A dense, row-major).
pub fn solve_min_eq<R: Real>(a: &SmallMat<R>, b: &[R], c: &[R], tol: &Tol<R>) -> Result<LpOutcome<R>> {
    let d = a.rows;
    let k = a.cols;
    assert_eq!(b.len(), d, "rhs length");
    assert_eq!(c.len(), k, "cost length");

    let ncols = k + d + 1; // originals, artificials, rhs
    let rhs = ncols - 1;
    let mut t = vec![R::zero(); d * ncols];
    let mut scale = R::one();
    for i in 0..d {
        let flip = if b[i] < R::zero() { -R::one() } else { R::one() };
        for j in 0..k {
            let v = flip * a.at(i, j);
            t[i * ncols + j] = v;
            scale = scale.max(v.abs());
        }
        t[i * ncols + k + i] = R::one();
        t[i * ncols + rhs] = flip * b[i];
        scale = scale.max((flip * b[i]).abs());
    }
    let eps = tol.feas * scale;
    let piv_eps = tol.det.max(R::of(1e-13)) * scale;

    let mut basis: Vec<usize> = (k..k + d).collect();

    // Phase-1 cost row (sum of artificials) and phase-2 cost row (c), kept
    // in reduced form simultaneously.
    let mut z1 = vec![R::zero(); ncols];
    for j in k..k + d {
        z1[j] = R::one();
    }
    for i in 0..d {
        // basis starts as artificials, each with phase-1 cost 1
        for j in 0..ncols {
            let v = t[i * ncols + j];
            z1[j] -= v;
        }
    }
    let mut z2 = vec![R::zero(); ncols];
    z2[..k].copy_from_slice(c);

    let mut phase = 1;
    let max_iters = 50_000;
    for _iter in 0..max_iters {
        let z: &Vec<R> = if phase == 1 { &z1 } else { &z2 };
        // Bland: entering = smallest-index column with negative reduced cost.
        // In phase 2, artificial columns are never candidates.
        let jmax = if phase == 1 { k + d } else { k };
        let mut enter = None;
        for j in 0..jmax {
            if z[j] < -eps {
                enter = Some(j);
                break;
            }
        }
        let Some(je) = enter else {
            if phase == 1 {
                let p1 = -z1[rhs];
                if p1 > eps {
                    return Ok(LpOutcome::Infeasible);
                }
                // Drive remaining basic artificials out where possible; rows
                // where we cannot are redundant and harmless (value 0).
                for i in 0..d {
                    if basis[i] >= k {
                        if let Some(j) = (0..k).find(|&j| t[i * ncols + j].abs() > piv_eps) {
                            pivot(&mut t, &mut z1, &mut z2, &mut basis, d, ncols, i, j);
                        }
                    }
                }
                phase = 2;
                continue;
            }
            // Phase-2 optimal.
            let mut x = vec![R::zero(); k];
            for i in 0..d {
                if basis[i] < k {
                    x[basis[i]] = t[i * ncols + rhs];
                }
            }
            return Ok(LpOutcome::Optimal { value: -z2[rhs], x });
        };

        // Ratio test; Bland tie-break on smallest basis index.
        let mut leave: Option<(usize, R)> = None;
        for i in 0..d {
            let aij = t[i * ncols + je];
            if aij > piv_eps {
                let ratio = t[i * ncols + rhs] / aij;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - eps || (ratio <= lr + eps && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else {
            return Ok(if phase == 1 { LpOutcome::Infeasible } else { LpOutcome::Unbounded });
        };
        pivot(&mut t, &mut z1, &mut z2, &mut basis, d, ncols, li, je);
    }
    Err(Error::NoConvergence("simplex iteration cap".into()))
}

fn pivot<R: Real>(
    t: &mut [R],
    z1: &mut [R],
    z2: &mut [R],
    basis: &mut [usize],
    d: usize,
    ncols: usize,
    row: usize,
    col: usize,
) {
    let p = t[row * ncols + col];
    let pinv = p.recip();
    for j in 0..ncols {
        t[row * ncols + j] = t[row * ncols + j] * pinv;
    }
    for i in 0..d {
        if i != row {
            let f = t[i * ncols + col];
            if f != R::zero() {
                for j in 0..ncols {
                    let v = t[row * ncols + j];
                    t[i * ncols + j] = t[i * ncols + j] - f * v;
                }
            }
        }
    }
    for z in [z1, z2] {
        let f = z[col];
        if f != R::zero() {
            for j in 0..ncols {
                let v = t[row * ncols + j];
                z[j] = z[j] - f * v;
            }
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tol<f64> {
        Tol::default()
    }

    #[test]
    fn feasible_hand_case() {
        // min x+y s.t. x + 2y = 4, x - y = 1  → x = 2, y = 1, value 3.
        let a = SmallMat::new(2, 2, vec![1.0, 2.0, 1.0, -1.0]);
        match solve_min_eq(&a, &[4.0, 1.0], &[1.0, 1.0], &tol()).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 3.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x = -1 with x >= 0 is infeasible.
        let a = SmallMat::new(1, 1, vec![1.0]);
        assert_eq!(
            solve_min_eq(&a, &[-1.0], &[1.0], &tol()).unwrap(),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn unbounded_detected() {
        // min -x s.t. x - y = 0: x can grow without bound.
        let a = SmallMat::new(1, 2, vec![1.0, -1.0]);
        assert_eq!(
            solve_min_eq(&a, &[0.0], &[-1.0, 0.0], &tol()).unwrap(),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn degenerate_rhs_zero_is_fine() {
        // min Σμ s.t. Vμ = 0 → 0 (gauge of the origin).
        let a = SmallMat::new(2, 3, vec![1.0, -1.0, 0.0, 0.0, 1.0, -1.0]);
        match solve_min_eq(&a, &[0.0, 0.0], &[1.0, 1.0, 1.0], &tol()).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!(value.abs() < 1e-12),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
