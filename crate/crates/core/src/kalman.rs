//! Kalman decomposition of `(A, B, C)` into its minimal part and the hidden
//! (uncontrollable or unobservable) remainder.
//!
//! Bases are built by Krylov iteration with Gram-Schmidt on the rate-normalized
//! drift, so the rank decisions are scale free.

use alloc::vec::Vec;

use libm::sqrt;
use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{eigenvalues, extend_orthonormal, orthogonal_complement, RMatrix};

/// Relative tolerance for controllability and observability rank decisions.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Minimal realization.
    pub a: RMatrix,
    pub b: RMatrix,
    pub c: RMatrix,
    /// Drift on the uncontrollable quotient.
    pub uncontrollable: RMatrix,
    /// Drift on the unobservable part of the controllable subspace.
    pub unobservable: RMatrix,
}

impl Decomposition {
    pub fn new(a: &RMatrix, b: &RMatrix, c: &RMatrix) -> Self {
        let n = a.rows();
        assert_eq!(a.cols(), n);
        assert_eq!(b.rows(), n);
        assert_eq!(c.cols(), n);
        let scale = a.max_abs();
        let an = if scale > 0.0 {
            a.map(|x| x / scale)
        } else {
            a.clone()
        };

        let inputs: Vec<Vec<f64>> = (0..b.cols()).map(|j| b.column(j)).collect();
        let vc = krylov_basis(&an, &inputs, n);
        let vc_m = RMatrix::from_columns(n, &vc);
        let a_c = vc_m.transpose().matmul(a).matmul(&vc_m);
        let b_c = vc_m.transpose().matmul(b);
        let c_c = c.matmul(&vc_m);

        let comp = orthogonal_complement(&vc, n);
        let vu = RMatrix::from_columns(n, &comp);
        let uncontrollable = vu.transpose().matmul(a).matmul(&vu);

        let nc = vc.len();
        let a_ct = an_restricted(&a_c, scale).transpose();
        let outputs: Vec<Vec<f64>> = (0..c_c.rows()).map(|i| c_c.row(i).to_vec()).collect();
        let w = krylov_basis(&a_ct, &outputs, nc);
        let w_m = RMatrix::from_columns(nc, &w);
        let a_m = w_m.transpose().matmul(&a_c).matmul(&w_m);
        let b_m = w_m.transpose().matmul(&b_c);
        let c_m = c_c.matmul(&w_m);

        let ncomp = orthogonal_complement(&w, nc);
        let nu = RMatrix::from_columns(nc, &ncomp);
        let unobservable = nu.transpose().matmul(&a_c).matmul(&nu);

        Self {
            a: a_m,
            b: b_m,
            c: c_m,
            uncontrollable,
            unobservable,
        }
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    /// Eigenvalues of the minimal drift.
    pub fn visible_eigenvalues(&self) -> Result<Vec<Complex64>, Error> {
        eigenvalues(&self.a)
    }

    /// Eigenvalues of the hidden blocks.
    pub fn hidden_eigenvalues(&self) -> Result<Vec<Complex64>, Error> {
        let mut ev = eigenvalues(&self.uncontrollable)?;
        ev.extend(eigenvalues(&self.unobservable)?);
        Ok(ev)
    }
}

fn an_restricted(a_c: &RMatrix, scale: f64) -> RMatrix {
    if scale > 0.0 {
        a_c.map(|x| x / scale)
    } else {
        a_c.clone()
    }
}

/// Orthonormal basis of the smallest `A`-invariant subspace containing `seeds`.
fn krylov_basis(a: &RMatrix, seeds: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let unit: Vec<Vec<f64>> = seeds
        .iter()
        .filter_map(|v| {
            let norm = sqrt(v.iter().map(|x| x * x).sum());
            (norm > 0.0).then(|| v.iter().map(|x| x / norm).collect())
        })
        .collect();
    extend_orthonormal(&mut basis, &unit, RANK_TOL);
    let mut frontier = 0;
    while frontier < basis.len() && basis.len() < n {
        let end = basis.len();
        let next: Vec<Vec<f64>> = basis[frontier..end].iter().map(|q| a.mul_vec(q)).collect();
        frontier = end;
        extend_orthonormal(&mut basis, &next, RANK_TOL);
    }
    basis
}
