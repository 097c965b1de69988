//! Dense linear algebra for small real and complex matrices.
//!
//! Everything here is sized for state spaces of a few dozen quadratures at
//! most: LU with partial pivoting, a complex Schur decomposition by the shifted
//! QR iteration, triangular eigenvectors and Gram-Schmidt bases.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::sqrt;
use num_complex::Complex64;

use crate::error::Error;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RMatrix = Matrix<f64>;
pub type CMatrix = Matrix<Complex64>;

impl<T: Copy + Default> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a row-major slice.
    pub fn from_rows(rows: usize, cols: usize, data: &[T]) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Submatrix picking the given rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl RMatrix {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn matmul(&self, rhs: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = RMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn to_complex(&self) -> CMatrix {
        self.map(|x| Complex64::new(x, 0.0))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vec<f64>]) -> RMatrix {
        RMatrix::from_fn(n, cols.len(), |i, j| cols[j][i])
    }
}

impl CMatrix {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Sum of |re| + |im| over the largest row.
    fn norm1_rows(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|z| z.re.abs() + z.im.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes a square matrix. A pivot below `100 n eps |A|` counts as
    /// singular.
    pub fn new(mut a: CMatrix) -> Result<Self, Error> {
        let n = a.rows;
        assert_eq!(n, a.cols, "LU needs a square matrix");
        let scale = a.norm1_rows();
        let tiny = 100.0 * (n.max(1) as f64) * f64::EPSILON * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].norm();
            for i in k + 1..n {
                let v = a[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny || best == 0.0 {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(i, j)] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(i, j)] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `A^T x = b` (plain transpose, no conjugation).
    pub fn solve_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        // U^T y = b
        let mut y = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(j, i)] * y[j];
                y[i] -= t;
            }
            y[i] /= self.lu[(i, i)];
        }
        // L^T z = y
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(j, i)] * y[j];
                y[i] -= t;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.dim();
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Complex Schur form `A = Z T Z^H` with `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: CMatrix,
    pub z: CMatrix,
}

impl Schur {
    pub fn new(a: &CMatrix) -> Result<Self, Error> {
        let n = a.rows;
        assert_eq!(n, a.cols, "Schur needs a square matrix");
        let (mut h, mut z) = hessenberg(a);
        qr_iterate(&mut h, &mut z)?;
        Ok(Self { t: h, z })
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.rows).map(|i| self.t[(i, i)]).collect()
    }

    /// Unit-norm right eigenvectors as the columns of the returned matrix.
    ///
    /// For a defective matrix the back-substitution divides by a clamped
    /// near-zero gap, which yields nearly parallel columns; that is exactly
    /// the signal the exceptional-point indicator looks for.
    pub fn eigenvectors(&self) -> CMatrix {
        let n = self.t.rows;
        let t = &self.t;
        let smin = (f64::EPSILON * t.norm1_rows()).max(f64::MIN_POSITIVE);
        let mut y = CMatrix::zeros(n, n);
        for k in 0..n {
            let lambda = t[(k, k)];
            y[(k, k)] = Complex64::new(1.0, 0.0);
            for i in (0..k).rev() {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in i + 1..=k {
                    acc += t[(i, j)] * y[(j, k)];
                }
                let mut d = t[(i, i)] - lambda;
                if d.norm() < smin {
                    d = Complex64::new(smin, 0.0);
                }
                y[(i, k)] = -acc / d;
            }
        }
        let mut v = self.z.matmul(&y);
        for k in 0..n {
            let norm = sqrt((0..n).map(|i| v[(i, k)].norm_sqr()).sum());
            if norm > 0.0 {
                for i in 0..n {
                    v[(i, k)] /= norm;
                }
            }
        }
        v
    }
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(a: &RMatrix) -> Result<Vec<Complex64>, Error> {
    if a.rows == 0 {
        return Ok(Vec::new());
    }
    Ok(Schur::new(&a.to_complex())?.eigenvalues())
}

/// Householder reduction to upper Hessenberg form, returning `(H, Q)` with
/// `A = Q H Q^H`.
fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows;
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = sqrt((k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum());
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vnorm = sqrt(v.iter().map(|z| z.norm_sqr()).sum());
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // H <- (I - 2 v v^H) H
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (r, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + r, j)];
            }
            for (r, vi) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= *vi * s * 2.0;
            }
        }
        // H <- H (I - 2 v v^H), Q <- Q (I - 2 v v^H)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (r, vi) in v.iter().enumerate() {
                    s += m[(i, k + 1 + r)] * *vi;
                }
                for (r, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= s * vi.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (h, q)
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Single-shift QR iteration on a Hessenberg matrix, accumulating into `z`.
fn qr_iterate(h: &mut CMatrix, z: &mut CMatrix) -> Result<(), Error> {
    let n = h.rows;
    if n < 2 {
        return Ok(());
    }
    let norm = h.norm1_rows();
    if norm == 0.0 {
        return Ok(());
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 60 * n;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut s = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if s == 0.0 {
                s = norm;
            }
            if abs1(h[(lo, lo - 1)]) <= f64::EPSILON * s {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence);
        }

        let mu = if iter.is_multiple_of(11) {
            h[(hi, hi)] + Complex64::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - mu, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let start = if k == lo { lo } else { k - 1 };
            for j in start..n {
                let t1 = h[(k, j)];
                let t2 = h[(k + 1, j)];
                h[(k, j)] = t1 * c + s * t2;
                h[(k + 1, j)] = -s.conj() * t1 + t2 * c;
            }
            let last = (k + 2).min(hi);
            for i in 0..=last {
                let t1 = h[(i, k)];
                let t2 = h[(i, k + 1)];
                h[(i, k)] = t1 * c + t2 * s.conj();
                h[(i, k + 1)] = -t1 * s + t2 * c;
            }
            for i in 0..n {
                let t1 = z[(i, k)];
                let t2 = z[(i, k + 1)];
                z[(i, k)] = t1 * c + t2 * s.conj();
                z[(i, k + 1)] = -t1 * s + t2 * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = zero;
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = zero;
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let den_plus = p + disc;
    let den_minus = p - disc;
    let den = if den_plus.norm() >= den_minus.norm() {
        den_plus
    } else {
        den_minus
    };
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = libm::hypot(ax, ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// Orthonormal basis for the span of `candidates`, appended to `basis`.
///
/// A candidate is kept when its component orthogonal to the current basis
/// exceeds `tol` in absolute norm. Returns how many vectors were added.
pub fn extend_orthonormal(basis: &mut Vec<Vec<f64>>, candidates: &[Vec<f64>], tol: f64) -> usize {
    let mut added = 0;
    for cand in candidates {
        let mut v = cand.clone();
        for _ in 0..2 {
            for q in basis.iter() {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
            }
        }
        let norm = sqrt(v.iter().map(|x| x * x).sum());
        if norm > tol {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
            added += 1;
        }
    }
    added
}

/// Orthonormal completion of `basis` to the full space `R^n`.
pub fn orthogonal_complement(basis: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut full = basis.to_vec();
    let units: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    let start = full.len();
    for e in &units {
        if full.len() == n {
            break;
        }
        extend_orthonormal(&mut full, core::slice::from_ref(e), 1e-8);
    }
    full.split_off(start)
}

/// Condition number `|V|_F |V^-1|_F`; infinite for a numerically singular `V`.
pub fn condition_number(v: &CMatrix) -> f64 {
    match Lu::new(v.clone()) {
        Ok(lu) => v.frobenius_norm() * lu.inverse().frobenius_norm(),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn lu_solves_and_transposes() {
        let a = CMatrix::from_rows(
            3,
            3,
            &[
                c(2.0, 1.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(1.0, -1.0),
                c(3.0, 0.0),
                c(1.0, 2.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(4.0, 0.5),
            ],
        );
        let b = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 2.0)];
        let lu = Lu::new(a.clone()).unwrap();
        let x = lu.solve(&b);
        for i in 0..3 {
            let r: Complex64 = (0..3).map(|j| a[(i, j)] * x[j]).sum();
            assert!((r - b[i]).norm() < 1e-14);
        }
        let xt = lu.solve_transpose(&b);
        for i in 0..3 {
            let r: Complex64 = (0..3).map(|j| a[(j, i)] * xt[j]).sum();
            assert!((r - b[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CMatrix::from_rows(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert!(matches!(Lu::new(a), Err(Error::Singular)));
    }

    #[test]
    fn eigenvalues_of_rotation_generator() {
        let a = RMatrix::from_rows(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let ev = sorted(eigenvalues(&a).unwrap());
        assert!((ev[0] - c(0.0, -2.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_companion_matrix() {
        // roots 1, 2, 3, 4
        let a = RMatrix::from_rows(
            4,
            4,
            &[
                10.0, -35.0, 50.0, -24.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0,
                0.0,
            ],
        );
        let ev = sorted(eigenvalues(&a).unwrap());
        for (k, z) in ev.iter().enumerate() {
            assert!((z - c(k as f64 + 1.0, 0.0)).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn schur_reconstructs_matrix() {
        let a = CMatrix::from_fn(5, 5, |i, j| {
            c(
                ((i * 7 + j * 3) % 5) as f64 - 2.0,
                ((i + 2 * j) % 3) as f64 * 0.3,
            )
        });
        let s = Schur::new(&a).unwrap();
        let back = s.z.matmul(&s.t).matmul(&s.z.adjoint());
        for i in 0..5 {
            for j in 0..5 {
                assert!((back[(i, j)] - a[(i, j)]).norm() < 1e-12);
                if i > j {
                    assert_eq!(s.t[(i, j)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn eigenvectors_satisfy_eigen_equation() {
        let a = CMatrix::from_fn(4, 4, |i, j| {
            c(
                (i as f64 - j as f64) * 0.7 + if i == j { 1.0 } else { 0.0 },
                (i * j) as f64 * 0.1,
            )
        });
        let s = Schur::new(&a).unwrap();
        let v = s.eigenvectors();
        let lam = s.eigenvalues();
        for k in 0..4 {
            for i in 0..4 {
                let av: Complex64 = (0..4).map(|j| a[(i, j)] * v[(j, k)]).sum();
                assert!((av - lam[k] * v[(i, k)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn condition_number_blows_up_near_defective_matrix() {
        let near = RMatrix::from_rows(2, 2, &[0.0, 1.0, 1e-12, 0.0]).to_complex();
        let v = Schur::new(&near).unwrap().eigenvectors();
        assert!(condition_number(&v) > 1e4);
        let normal = RMatrix::from_rows(2, 2, &[0.0, 1.0, -1.0, 0.0]).to_complex();
        let v = Schur::new(&normal).unwrap().eigenvectors();
        assert!((condition_number(&v) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let mut basis = Vec::new();
        let added = extend_orthonormal(
            &mut basis,
            &[
                vec![1.0, 1.0, 0.0],
                vec![2.0, 2.0, 0.0],
                vec![0.0, 1.0, 0.0],
            ],
            1e-10,
        );
        assert_eq!(added, 2);
        let comp = orthogonal_complement(&basis, 3);
        assert_eq!(comp.len(), 1);
        assert!((comp[0][2].abs() - 1.0).abs() < 1e-14);
    }
}
