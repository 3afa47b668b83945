//! Singular value decomposition over R, C and H (cell F7).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{finish, require_member, require_square};
use crate::error::{Error, Result};
use crate::numeric::{from_na, svd_sorted, to_complex_na, to_na, DenseMatrix, Field, NaScalar, Quaternion};
use crate::registry::{spec, FactoredElement, Params};

/// Relative size below which a singular value counts as zero.
const SINGULAR_MARGIN: f64 = 1e-13;

/// `G = U diag(sigma) V` with `U, V` unitary over the field of `G` and
/// `sigma` positive and descending.
pub fn svd_triplet(g: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    require_square(g)?;
    let (u, s, v) = match g.field() {
        Field::R => generic::<f64>(g)?,
        Field::C => generic::<Complex64>(g)?,
        Field::H => quaternion(g)?,
    };
    let top = s.first().copied().unwrap_or(0.0);
    if s.iter().any(|&x| x <= SINGULAR_MARGIN * top.max(f64::MIN_POSITIVE)) {
        return Err(Error::Singular);
    }
    Ok((u, s, v))
}

fn generic<T: NaScalar>(g: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    let (u, s, vt) = svd_sorted(&to_na::<T>(g)?);
    Ok((from_na(&u), s, from_na(&vt)))
}

/// Quaternion column `a + b j` from the complex column `[a; -conj(b)]`.
pub(crate) fn quaternion_column(c: &DMatrix<Complex64>, col: usize) -> DenseMatrix {
    let n = c.nrows() / 2;
    DenseMatrix::from_fn(Field::H, n, 1, |i, _| Quaternion::from_pair(c[(i, col)], -c[(n + i, col)].conj()))
}

/// Greedy quaternion Gram-Schmidt: picks `count` orthonormal vectors from
/// `candidates`, each time taking the candidate with the largest residual.
pub(crate) fn quaternion_basis(candidates: &[DenseMatrix], count: usize) -> Vec<DenseMatrix> {
    let mut basis: Vec<DenseMatrix> = Vec::with_capacity(count);
    let mut residuals: Vec<DenseMatrix> = candidates.to_vec();
    while basis.len() < count {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.frobenius_norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("enough candidates");
        let mut v = residuals[best].scale(1.0 / norm);
        for b in &basis {
            let proj = b.star().try_mul(&v).expect("column shapes");
            v = &v - &(b * &proj);
        }
        let v = v.scale(1.0 / v.frobenius_norm());
        for r in residuals.iter_mut() {
            let proj = v.star().try_mul(r).expect("column shapes");
            *r = &*r - &(&v * &proj);
        }
        basis.push(v);
    }
    basis
}

fn quaternion(g: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    let n = g.rows();
    let (uc, _, _) = svd_sorted(&to_complex_na(g));
    let cands: Vec<DenseMatrix> = (0..2 * n).map(|k| quaternion_column(&uc, k)).collect();
    let basis = quaternion_basis(&cands, n);
    let mut u = DenseMatrix::zeros(Field::H, n, n);
    for (k, b) in basis.iter().enumerate() {
        u.set_block(0, k, b);
    }
    let ug = &u.star() * g;
    let norms: Vec<f64> = (0..n).map(|k| ug.submatrix(k, 0, 1, n).frobenius_norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let u = u.permute_columns(&order);
    let s: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let inv: Vec<f64> = s.iter().map(|x| if *x > 0.0 { 1.0 / x } else { 0.0 }).collect();
    let v = &DenseMatrix::diag_real(Field::R, &inv) * &(&u.star() * g);
    Ok((u, s, v))
}

/// Cell F7: `G = U Sigma V` with `Sigma = diag(e^theta)`.
pub fn svd_factor(g: &DenseMatrix) -> Result<FactoredElement> {
    require_square(g)?;
    let s = spec(7, g.field().beta(), Params::N { n: g.rows() })?;
    require_member(&s, g)?;
    let (u, sigma, v) = svd_triplet(g)?;
    let theta: Vec<f64> = sigma.iter().map(|x| x.ln()).collect();
    Ok(finish(&s, vec![u], theta, vec![v], g))
}
