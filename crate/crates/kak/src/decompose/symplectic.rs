//! Real symplectic SVD (cell F10) and Williamson's normal form.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::{finish, require_field, require_member, require_square};
use crate::error::{Error, Result};
use crate::numeric::{eigh_sorted, from_na, polar_unitary, symplectic_j, to_na, DenseMatrix, Field};
use crate::registry::{spec, FactoredElement, Params};

/// Orthonormal pair columns for a real skew-symmetric `K` of size `n`:
/// an `n x 2m` matrix `Q`, `m = n / 2`, laid out `(k, m + k)`, with
/// `Q^T K Q = [[0, L], [-L, 0]]` and `L = diag(l)` descending.
pub(crate) fn skew_pairs(k: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let size = k.nrows();
    let m = size / 2;
    let ik = k.map(|x| Complex64::new(0.0, x));
    let (vals, vecs) = eigh_sorted(&ik);
    let mut q = DMatrix::zeros(size, 2 * m);
    let mut lambda = Vec::with_capacity(m);
    for i in 0..m {
        let idx = size - 1 - i;
        let v = vecs.column(idx);
        q.set_column(i, &v.map(|z| z.im * std::f64::consts::SQRT_2));
        q.set_column(m + i, &v.map(|z| z.re * std::f64::consts::SQRT_2));
        lambda.push(vals[idx]);
    }
    (q, lambda)
}

/// `G = O diag(Sigma, Sigma) S` for real invertible `G` of size `2n`, with
/// `O` orthogonal, `S` symplectic and `Sigma = diag(e^theta)` descending.
pub fn sympl_svd(g: &DenseMatrix) -> Result<FactoredElement> {
    require_square(g)?;
    require_field(g, &[Field::R])?;
    if !g.rows().is_multiple_of(2) {
        return Err(Error::SizeMismatch(format!("symplectic SVD needs even size, got {}", g.rows())));
    }
    let n = g.rows() / 2;
    let sp = spec(10, 1, Params::N { n })?;
    require_member(&sp, g)?;
    let gn = to_na::<f64>(g)?;
    let j = to_na::<f64>(&symplectic_j(Field::R, n))?;
    let k = &gn * &j * gn.transpose();
    let (o, lambda) = skew_pairs(&k);
    let o = polar_unitary(&o);
    let sigma: Vec<f64> = lambda.iter().map(|l| l.max(0.0).sqrt()).collect();
    let top = sigma.first().copied().unwrap_or(1.0);
    if sigma.iter().any(|&s| s <= 1e-13 * top) {
        return Err(Error::Singular);
    }
    let inv = DVector::from_iterator(2 * n, sigma.iter().chain(&sigma).map(|s| 1.0 / s));
    let s = DMatrix::from_diagonal(&inv) * o.transpose() * &gn;
    let theta = sigma.iter().map(|s| s.ln()).collect();
    Ok(finish(&sp, vec![from_na(&o)], theta, vec![from_na(&s)], g))
}

/// Williamson normal form of a real symmetric positive definite `A` of
/// size `2n`: symplectic `S` and descending `d` with
/// `S A S^T = diag(d, d)`. The `d` are the symplectic eigenvalues of `A`.
pub fn williamson(a: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    require_square(a)?;
    require_field(a, &[Field::R])?;
    let an = to_na::<f64>(a)?;
    let asym = (&an - an.transpose()).norm();
    if asym > 1e-10 * an.norm().max(1.0) {
        return Err(Error::NotSymmetric { residual: asym });
    }
    let l = Cholesky::new((&an + an.transpose()) * 0.5).ok_or(Error::NotPositiveDefinite)?.unpack();
    let fe = sympl_svd(&from_na(&l.transpose()))?;
    // A = S0^T diag(Sigma^2, Sigma^2) S0, so S = S0^{-T} = -J S0 J.
    let n = a.rows() / 2;
    let j = symplectic_j(Field::R, n);
    let s = (&(&j * &fe.k2[0]) * &j).scale(-1.0);
    let d = fe.theta.iter().map(|t| (2.0 * t).exp()).collect();
    Ok((s, d))
}
