//! Flat linear algebra for matrix spaces M[n,m] ≅ R^{nm}, row-major.
//!
//! Points are plain slices; the shape travels with the body, not the point.
//! Everything here is desk scale (nm ≤ 8), so dense O(d³) routines are fine.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Shape (n, m) of a matrix space M[n,m]; a column body in R^n is (n, 1),
/// a row body in R^m is (1, m).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Hash)]
pub struct MatShape {
    pub n: usize,
    pub m: usize,
}

impl MatShape {
    #[inline]
    pub fn of(n: usize, m: usize) -> Self {
        MatShape { n, m }
    }

    #[inline]
    pub fn col(n: usize) -> Self {
        MatShape { n, m: 1 }
    }

    #[inline]
    pub fn row(m: usize) -> Self {
        MatShape { n: 1, m }
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.n * self.m
    }

    #[inline]
    pub fn transpose(self) -> Self {
        MatShape { n: self.m, m: self.n }
    }

    pub fn check_point<R: Real>(self, x: &[R], context: &'static str) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{} ({} entries)", self.n, self.m, self.dim()),
                got: format!("{} entries", x.len()),
                context,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for MatShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M[{},{}]", self.n, self.m)
    }
}

#[inline]
pub fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    debug_assert_eq!(a.len(), b.len());
    let mut s = R::zero();
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub fn norm_sq<R: Real>(a: &[R]) -> R {
    dot(a, a)
}

#[inline]
pub fn norm<R: Real>(a: &[R]) -> R {
    norm_sq(a).sqrt()
}

pub fn scaled<R: Real>(a: &[R], c: R) -> Vec<R> {
    a.iter().map(|&x| x * c).collect()
}

pub fn add<R: Real>(a: &[R], b: &[R]) -> Vec<R> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<R: Real>(a: &[R], b: &[R]) -> Vec<R> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn neg<R: Real>(a: &[R]) -> Vec<R> {
    a.iter().map(|&x| -x).collect()
}

/// a + c·b, in place on a fresh vector.
pub fn add_scaled<R: Real>(a: &[R], c: R, b: &[R]) -> Vec<R> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + c * y).collect()
}

pub fn normalized<R: Real>(a: &[R]) -> Option<Vec<R>> {
    let n = norm(a);
    if n <= R::zero() {
        return None;
    }
    Some(scaled(a, n.recip()))
}

/// Row vector vᵗ·x ∈ R^m for v ∈ R^n, x ∈ M[n,m] (row-major flat).
#[inline]
pub fn vt_x<R: Real>(v: &[R], x: &[R], shape: MatShape) -> Vec<R> {
    debug_assert_eq!(v.len(), shape.n);
    debug_assert_eq!(x.len(), shape.dim());
    let mut out = vec![R::zero(); shape.m];
    for i in 0..shape.n {
        let vi = v[i];
        if vi != R::zero() {
            let row = &x[i * shape.m..(i + 1) * shape.m];
            for j in 0..shape.m {
                out[j] += vi * row[j];
            }
        }
    }
    out
}

/// Same as [`vt_x`] but writing into a caller-provided buffer (hot loops).
#[inline]
pub fn vt_x_into<R: Real>(v: &[R], x: &[R], shape: MatShape, out: &mut [R]) {
    debug_assert_eq!(out.len(), shape.m);
    for j in 0..shape.m {
        out[j] = R::zero();
    }
    for i in 0..shape.n {
        let vi = v[i];
        if vi != R::zero() {
            let row = &x[i * shape.m..(i + 1) * shape.m];
            for j in 0..shape.m {
                out[j] += vi * row[j];
            }
        }
    }
}

/// ξᵗ·x ∈ R^m for ξ ∈ R^n — alias of [`vt_x`] kept for call-site readability.
#[inline]
pub fn xi_t_x<R: Real>(xi: &[R], x: &[R], shape: MatShape) -> Vec<R> {
    vt_x(xi, x, shape)
}

/// Outer product u·r ∈ M[n,m] for a column u ∈ R^n and a row r ∈ R^m.
pub fn outer<R: Real>(u: &[R], r: &[R]) -> Vec<R> {
    let mut out = Vec::with_capacity(u.len() * r.len());
    for &ui in u {
        for &rj in r {
            out.push(ui * rj);
        }
    }
    out
}

/// Rotate a 2-vector by +90°.
#[inline]
pub fn rot90<R: Real>(v: &[R]) -> Vec<R> {
    debug_assert_eq!(v.len(), 2);
    vec![-v[1], v[0]]
}

/// Dense small matrix, row-major. Used both for structured actions (left
/// A ∈ R^{k×n}, right B ∈ R^{m×l}) and for GL(d) maps on flattened M[n,m].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallMat<R> {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<R>,
}

impl<R: Real> SmallMat<R> {
    pub fn new(rows: usize, cols: usize, a: Vec<R>) -> Self {
        assert_eq!(a.len(), rows * cols, "matrix data length");
        SmallMat { rows, cols, a }
    }

    pub fn identity(d: usize) -> Self {
        let mut a = vec![R::zero(); d * d];
        for i in 0..d {
            a[i * d + i] = R::one();
        }
        SmallMat { rows: d, cols: d, a }
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            a.extend_from_slice(row);
        }
        SmallMat { rows: r, cols: c, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> R {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.a[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut a = vec![R::zero(); self.a.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                a[j * self.rows + i] = self.at(i, j);
            }
        }
        SmallMat { rows: self.cols, cols: self.rows, a }
    }

    pub fn mul_vec(&self, x: &[R]) -> Vec<R> {
        assert_eq!(x.len(), self.cols, "mul_vec shape");
        let mut out = vec![R::zero(); self.rows];
        for i in 0..self.rows {
            out[i] = dot(&self.a[i * self.cols..(i + 1) * self.cols], x);
        }
        out
    }

    /// Aᵗ·x (without materializing the transpose).
    pub fn tr_mul_vec(&self, x: &[R]) -> Vec<R> {
        assert_eq!(x.len(), self.rows, "tr_mul_vec shape");
        let mut out = vec![R::zero(); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for j in 0..self.cols {
                out[j] += self.a[i * self.cols + j] * xi;
            }
        }
        out
    }

    pub fn mul(&self, other: &SmallMat<R>) -> SmallMat<R> {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut a = vec![R::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self.at(i, k);
                if s != R::zero() {
                    for j in 0..other.cols {
                        a[i * other.cols + j] += s * other.at(k, j);
                    }
                }
            }
        }
        SmallMat { rows: self.rows, cols: other.cols, a }
    }

    /// Determinant by LU with partial pivoting (square only).
    pub fn det(&self) -> R {
        assert_eq!(self.rows, self.cols, "det of non-square");
        let d = self.rows;
        let mut a = self.a.clone();
        let mut det = R::one();
        for col in 0..d {
            let mut piv = col;
            let mut best = a[col * d + col].abs();
            for r in col + 1..d {
                let v = a[r * d + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == R::zero() {
                return R::zero();
            }
            if piv != col {
                for j in 0..d {
                    a.swap(col * d + j, piv * d + j);
                }
                det = -det;
            }
            let p = a[col * d + col];
            det *= p;
            for r in col + 1..d {
                let f = a[r * d + col] / p;
                if f != R::zero() {
                    for j in col..d {
                        let v = a[col * d + j];
                        a[r * d + j] = a[r * d + j] - f * v;
                    }
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<SmallMat<R>> {
        assert_eq!(self.rows, self.cols, "inverse of non-square");
        let d = self.rows;
        let mut a = self.a.clone();
        let mut inv = SmallMat::identity(d).a;
        for col in 0..d {
            let mut piv = col;
            let mut best = a[col * d + col].abs();
            for r in col + 1..d {
                let v = a[r * d + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= R::of(1e-300) {
                return Err(Error::Degenerate("singular matrix in inverse".into()));
            }
            if piv != col {
                for j in 0..d {
                    a.swap(col * d + j, piv * d + j);
                    inv.swap(col * d + j, piv * d + j);
                }
            }
            let p = a[col * d + col];
            let pinv = p.recip();
            for j in 0..d {
                a[col * d + j] = a[col * d + j] * pinv;
                inv[col * d + j] = inv[col * d + j] * pinv;
            }
            for r in 0..d {
                if r != col {
                    let f = a[r * d + col];
                    if f != R::zero() {
                        for j in 0..d {
                            let av = a[col * d + j];
                            let iv = inv[col * d + j];
                            a[r * d + j] = a[r * d + j] - f * av;
                            inv[r * d + j] = inv[r * d + j] - f * iv;
                        }
                    }
                }
            }
        }
        Ok(SmallMat { rows: d, cols: d, a: inv })
    }
}

/// Left action A·x for x ∈ M[n,m], A ∈ R^{k×n}; result in M[k,m].
pub fn left_apply<R: Real>(a: &SmallMat<R>, x: &[R], shape: MatShape) -> Vec<R> {
    assert_eq!(a.cols, shape.n, "left action shape");
    assert_eq!(x.len(), shape.dim());
    let mut out = vec![R::zero(); a.rows * shape.m];
    for i in 0..a.rows {
        for t in 0..shape.n {
            let c = a.at(i, t);
            if c != R::zero() {
                let row = &x[t * shape.m..(t + 1) * shape.m];
                for j in 0..shape.m {
                    out[i * shape.m + j] += c * row[j];
                }
            }
        }
    }
    out
}

/// Right action x·B for x ∈ M[n,m], B ∈ R^{m×l}; result in M[n,l].
pub fn right_apply<R: Real>(x: &[R], shape: MatShape, b: &SmallMat<R>) -> Vec<R> {
    assert_eq!(b.rows, shape.m, "right action shape");
    assert_eq!(x.len(), shape.dim());
    let mut out = vec![R::zero(); shape.n * b.cols];
    for i in 0..shape.n {
        let row = &x[i * shape.m..(i + 1) * shape.m];
        for j in 0..b.cols {
            let mut s = R::zero();
            for t in 0..shape.m {
                s += row[t] * b.at(t, j);
            }
            out[i * b.cols + j] = s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a: SmallMat<f64> =
            SmallMat::new(3, 3, vec![2.0, 1.0, 0.0, -1.0, 3.0, 2.0, 0.5, 0.0, 1.0]);
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id.at(i, j) - want).abs() < 1e-12);
            }
        }
        let d: f64 = a.det();
        let di: f64 = inv.det();
        assert!((d * di - 1.0).abs() < 1e-12);
    }

    #[test]
    fn actions_match_hand_example() {
        // x = [[1,2],[3,4]], A = [[0,1],[1,0]] swaps rows; B likewise swaps cols.
        let shape = MatShape::of(2, 2);
        let x: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0];
        let a = SmallMat::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(left_apply(&a, &x, shape), vec![3.0, 4.0, 1.0, 2.0]);
        assert_eq!(right_apply(&x, shape, &a), vec![2.0, 1.0, 4.0, 3.0]);
        // vᵗ·x for v = e1 picks the first row.
        assert_eq!(vt_x(&[1.0, 0.0], &x, shape), vec![1.0, 2.0]);
        // trace inner product compatibility: <A.x, y> = <x, Aᵗ.y>
        let y = vec![0.5, -1.0, 2.0, 0.25];
        let lhs = dot(&left_apply(&a, &x, shape), &y);
        let rhs = dot(&x, &left_apply(&a.transpose(), &y, shape));
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn outer_and_rot90() {
        assert_eq!(outer(&[1.0, 2.0], &[3.0, 4.0]), vec![3.0, 4.0, 6.0, 8.0]);
        assert_eq!(rot90(&[1.0, 0.0]), vec![0.0, 1.0]);
        assert_eq!(rot90(&[0.0, 1.0]), vec![-1.0, 0.0]);
    }
}
