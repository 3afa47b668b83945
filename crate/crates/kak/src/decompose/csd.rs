//! CS decomposition of a unitary matrix over R or C (cell F4).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{finish, require_field, require_member, require_square};
use crate::error::Result;
use crate::numeric::{complete_basis, from_na, orthonormalize_columns, polar_unitary, svd_sorted, to_na, DenseMatrix, Field, NaScalar};
use crate::registry::{spec, FactoredElement, Params};

/// Sine values at or below this are treated as exact zeros.
const ZERO_SINE: f64 = 1e-13;

/// `Q = diag(U_p, U_q) CS(theta) diag(U_r, U_s)` with row blocks `(p, q)`
/// and column blocks `(r, s)`; `theta` lies in `[0, pi/2)`, descending.
pub fn csd(u: &DenseMatrix, p: usize, q: usize, r: usize, s: usize) -> Result<FactoredElement> {
    require_square(u)?;
    require_field(u, &[Field::R, Field::C])?;
    let sp = spec(4, u.field().beta(), Params::Pqrs { p, q, r, s })?;
    require_member(&sp, u)?;
    let (k1, theta, k2) = match u.field() {
        Field::R => generic::<f64>(u, p, q, r, s)?,
        _ => generic::<Complex64>(u, p, q, r, s)?,
    };
    Ok(finish(&sp, k1, theta, k2, u))
}

pub(crate) fn block_diag<T: NaScalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let (n1, n2) = (a.nrows(), b.nrows());
    let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
    m.view_mut((0, 0), (n1, n1)).copy_from(a);
    m.view_mut((n1, n1), (n2, n2)).copy_from(b);
    m
}

#[allow(clippy::type_complexity)]
fn generic<T: NaScalar>(
    u: &DenseMatrix,
    p: usize,
    q: usize,
    r: usize,
    s: usize,
) -> Result<(Vec<DenseMatrix>, Vec<f64>, Vec<DenseMatrix>)> {
    let u = to_na::<T>(u)?;

    // Lower-right block carries the cosines; ascending cosines give
    // descending angles.
    let (uq, us, cos) = if s == 0 {
        (DMatrix::<T>::identity(q, q), DMatrix::<T>::zeros(0, 0), Vec::new())
    } else {
        let (w, sv, zt) = svd_sorted(&u.view((p, r), (q, s)).into_owned());
        let w = DMatrix::from_fn(q, s, |i, k| w[(i, s - 1 - k)]);
        let zt = DMatrix::from_fn(s, s, |k, j| zt[(s - 1 - k, j)]);
        let cos: Vec<f64> = (0..s).map(|k| sv[s - 1 - k].min(1.0)).collect();
        let full = complete_basis(&w);
        let mut uq = DMatrix::<T>::zeros(q, q);
        uq.columns_mut(0, q - s).copy_from(&full.columns(s, q - s));
        uq.columns_mut(q - s, s).copy_from(&w);
        (uq, zt, cos)
    };

    let left = block_diag(&DMatrix::identity(p, p), &uq.adjoint());
    let right = block_diag(&DMatrix::identity(r, r), &us.adjoint());
    let up_ = left * &u * right;

    let u12 = up_.view((0, r), (p, s));
    let sin: Vec<f64> = (0..s).map(|k| u12.column(k).norm().min(1.0)).collect();
    let mut seed = DMatrix::<T>::zeros(p, p);
    for (k, &sk) in sin.iter().enumerate() {
        if sk > ZERO_SINE {
            seed.set_column(k, &(u12.column(k) / T::from_real(sk)));
        }
    }
    let up = orthonormalize_columns(&seed, ZERO_SINE);

    let a11 = up.adjoint() * up_.view((0, 0), (p, r));
    let u21 = up_.view((p, 0), (q, r));
    let mut ur = DMatrix::<T>::zeros(r, r);
    for k in 0..s {
        let row = if sin[k] >= cos[k] {
            -u21.row(q - s + k) / T::from_real(sin[k])
        } else {
            a11.row(k) / T::from_real(cos[k])
        };
        ur.set_row(k, &row);
    }
    for k in s..p {
        ur.set_row(k, &a11.row(k));
    }
    for k in 0..q - s {
        ur.set_row(p + k, &u21.row(k));
    }
    let ur = polar_unitary(&ur);
    let theta: Vec<f64> = (0..s).map(|k| sin[k].atan2(cos[k])).collect();
    Ok((vec![from_na(&up), from_na(&uq)], theta, vec![from_na(&ur), from_na(&us)]))
}
