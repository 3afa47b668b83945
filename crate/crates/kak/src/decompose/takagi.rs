//! Takagi factorization, the `U Sigma O` decomposition (cell F13 over C)
//! and the Cholesky-like factorization of complex symmetric matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{finish, require_member, require_square};
use crate::error::{Error, Result};
use crate::numeric::{eigh_sorted, from_na, orthonormalize_columns, to_na, DenseMatrix, Field};
use crate::registry::{spec, FactoredElement, Params};

fn complex_input(a: &DenseMatrix) -> Result<DMatrix<Complex64>> {
    if a.field() == Field::H {
        return Err(Error::WrongField { expected: Field::C, found: Field::H });
    }
    to_na::<Complex64>(&a.promote(Field::C)?)
}

fn require_symmetric(a: &DMatrix<Complex64>) -> Result<()> {
    let residual = (a - a.transpose()).norm();
    if residual > 1e-10 * a.norm().max(1.0) {
        return Err(Error::NotSymmetric { residual });
    }
    Ok(())
}

/// `A = U diag(lambda) U^T` for complex symmetric `A`, with `U` unitary and
/// `lambda` nonnegative, descending.
pub fn takagi(a: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    require_square(a)?;
    let an = complex_input(a)?;
    require_symmetric(&an)?;
    let n = an.nrows();
    let an = (&an + an.transpose()) * Complex64::new(0.5, 0.0);
    // [[X, Y], [Y, -X]] [a; b] = s [a; b] gives A conj(a + ib) = s (a + ib).
    let (x, y) = (an.map(|z| z.re), an.map(|z| z.im));
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&x);
    h.view_mut((0, n), (n, n)).copy_from(&y);
    h.view_mut((n, 0), (n, n)).copy_from(&y);
    h.view_mut((n, n), (n, n)).copy_from(&(-&x));
    let (vals, vecs) = eigh_sorted(&h);
    let u = DMatrix::from_fn(n, n, |i, k| {
        let c = 2 * n - 1 - k;
        Complex64::new(vecs[(i, c)], vecs[(n + i, c)])
    });
    let u = orthonormalize_columns(&u, 1e-6);
    let lambda = (0..n).map(|k| vals[2 * n - 1 - k].max(0.0)).collect();
    Ok((from_na(&u), lambda))
}

/// `G = U diag(e^theta) O` for complex invertible `G` with `U` unitary and
/// `O` complex orthogonal, computed from the Takagi factorization of
/// `G G^T`.
pub fn uso_factor(g: &DenseMatrix) -> Result<FactoredElement> {
    require_square(g)?;
    let gn = complex_input(g)?;
    let g = from_na(&gn);
    let sp = spec(13, 2, Params::N { n: g.rows() })?;
    require_member(&sp, &g)?;
    let (u, lambda) = takagi(&from_na(&(&gn * gn.transpose())))?;
    let sigma: Vec<f64> = lambda.iter().map(|l| l.sqrt()).collect();
    let top = sigma.first().copied().unwrap_or(1.0);
    if sigma.iter().any(|&s| s <= 1e-13 * top) {
        return Err(Error::Singular);
    }
    let un = to_na::<Complex64>(&u)?;
    let inv = DVector::from_iterator(sigma.len(), sigma.iter().map(|s| Complex64::new(1.0 / s, 0.0)));
    let o = DMatrix::from_diagonal(&inv) * un.adjoint() * &gn;
    let theta = sigma.iter().map(|s| s.ln()).collect();
    Ok(finish(&sp, vec![u], theta, vec![from_na(&o)], &g))
}

/// Lower triangular `L` with `A = L L^T` (no conjugation) for complex
/// symmetric `A`. Unpivoted; a vanishing pivot is reported rather than
/// worked around.
pub fn chol_complex_symmetric(a: &DenseMatrix) -> Result<DenseMatrix> {
    require_square(a)?;
    let an = complex_input(a)?;
    require_symmetric(&an)?;
    let n = an.nrows();
    let floor = 1e-14 * an.norm().max(f64::MIN_POSITIVE);
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut d = an[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.norm() <= floor {
            return Err(Error::PivotBreakdown { index: j });
        }
        let pivot = d.sqrt();
        l[(j, j)] = pivot;
        for i in j + 1..n {
            let mut v = an[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / pivot;
        }
    }
    Ok(from_na(&l))
}
