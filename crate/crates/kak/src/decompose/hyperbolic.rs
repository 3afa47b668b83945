//! Hyperbolic SVD (F9), hyperbolic CS decomposition (F18) and the
//! corollaries folded out of them.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::csd::block_diag;
use super::{finish, require_field, require_member, require_square};
use crate::error::{Error, Result};
use crate::numeric::{complete_basis, eigh_sorted, from_na, polar_unitary, svd_sorted, to_na, DenseMatrix, Field, NaScalar};
use crate::registry::{spec, FactoredElement, Params};

fn signature_na<T: NaScalar>(p: usize, q: usize) -> DVector<T> {
    DVector::from_fn(p + q, |i, _| if i < p { T::one() } else { -T::one() })
}

fn real_diag<T: NaScalar>(d: impl IntoIterator<Item = f64>) -> DMatrix<T> {
    let v: Vec<T> = d.into_iter().map(T::from_real).collect();
    DMatrix::from_diagonal(&DVector::from_vec(v))
}

/// `G = O diag(e^theta) V` with `O` unitary and `V` in `U(p, q)`. The first
/// `p` angles and the last `q` angles are each descending.
pub fn hsvd(g: &DenseMatrix, p: usize, q: usize) -> Result<FactoredElement> {
    require_square(g)?;
    require_field(g, &[Field::R, Field::C])?;
    let sp = spec(9, g.field().beta(), Params::Pq { p, q })?;
    if g.rows() != p + q {
        return Err(Error::SizeMismatch(format!("hsvd with p + q = {} on a {}x{} matrix", p + q, g.rows(), g.cols())));
    }
    require_member(&sp, g)?;
    let (o, theta, v) = match g.field() {
        Field::R => hsvd_generic::<f64>(g, p, q)?,
        _ => hsvd_generic::<Complex64>(g, p, q)?,
    };
    Ok(finish(&sp, vec![o], theta, vec![v], g))
}

fn hsvd_generic<T: NaScalar>(g: &DenseMatrix, p: usize, q: usize) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    let n = p + q;
    let gn = to_na::<T>(g)?;
    let sig = DMatrix::from_diagonal(&signature_na::<T>(p, q));
    let k = &gn * &sig * gn.adjoint();
    let (vals, vecs) = eigh_sorted(&k);
    let found_p = vals.iter().filter(|&&x| x > 0.0).count();
    if found_p != p {
        return Err(Error::SignatureMismatch { p, q, found_p, found_q: n - found_p });
    }
    // Positives by decreasing value, then negatives by decreasing modulus.
    let order: Vec<usize> = (q..n).rev().chain(0..q).collect();
    let o = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    let sigma: Vec<f64> = order.iter().map(|&i| vals[i].abs().sqrt()).collect();
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    if sigma.iter().any(|&s| s <= 1e-13 * top) {
        return Err(Error::Singular);
    }
    let v = real_diag::<T>(sigma.iter().map(|s| 1.0 / s)) * o.adjoint() * &gn;
    let theta = sigma.iter().map(|s| s.ln()).collect();
    Ok((from_na(&o), theta, from_na(&v)))
}

/// `G = diag(U_p, U_q) H(theta) diag(V_p, V_q)` for `G` in `U(p, q)`,
/// `p >= q`, with `theta >= 0` descending.
pub fn hcsd(g: &DenseMatrix, p: usize, q: usize) -> Result<FactoredElement> {
    require_square(g)?;
    require_field(g, &[Field::R, Field::C])?;
    let sp = spec(18, g.field().beta(), Params::Pq { p, q })?;
    if g.rows() != p + q {
        return Err(Error::SizeMismatch(format!("hcsd with p + q = {} on a {}x{} matrix", p + q, g.rows(), g.cols())));
    }
    require_member(&sp, g)?;
    let (k1, theta, k2) = match g.field() {
        Field::R => hcsd_generic::<f64>(g, p, q)?,
        _ => hcsd_generic::<Complex64>(g, p, q)?,
    };
    Ok(finish(&sp, k1, theta, k2, g))
}

#[allow(clippy::type_complexity)]
fn hcsd_generic<T: NaScalar>(g: &DenseMatrix, p: usize, q: usize) -> Result<(Vec<DenseMatrix>, Vec<f64>, Vec<DenseMatrix>)> {
    let gn = to_na::<T>(g)?;
    let (uq, sh, vp) = if q == 0 {
        (DMatrix::<T>::zeros(0, 0), Vec::new(), DMatrix::<T>::identity(p, p))
    } else {
        let (w, sh, zt) = svd_sorted(&gn.view((p, 0), (q, p)).into_owned());
        let vp = complete_basis(&zt.adjoint()).adjoint();
        (w, sh, vp)
    };
    let theta: Vec<f64> = sh.iter().map(|s| s.asinh()).collect();
    let ch_inv = real_diag::<T>(theta.iter().map(|t| 1.0 / t.cosh()));
    let vq = polar_unitary(&(&ch_inv * uq.adjoint() * gn.view((p, p), (q, q))));
    let mid_inv = block_diag(&ch_inv, &DMatrix::identity(p - q, p - q));
    let up = polar_unitary(&(gn.view((0, 0), (p, p)) * vp.adjoint() * mid_inv));
    Ok((vec![from_na(&up), from_na(&uq)], theta, vec![from_na(&vp), from_na(&vq)]))
}

fn cholesky_factor<T: NaScalar>(k: &DenseMatrix) -> Result<DenseMatrix> {
    let kn = to_na::<T>(k)?;
    let herm_gap = (&kn - kn.adjoint()).norm();
    if herm_gap > 1e-10 * kn.norm().max(1.0) {
        return Err(Error::NotSymmetric { residual: herm_gap });
    }
    let sym = (&kn + kn.adjoint()) * T::from_real(0.5);
    let l = Cholesky::new(sym).ok_or(Error::NotPositiveDefinite)?.unpack();
    Ok(from_na(&l.adjoint()))
}

/// Solves `K x = lambda I_{p,q} x` for Hermitian positive definite `K`.
/// Returns `X` and `lambda` with `K X = I_{p,q} X diag(lambda)` and
/// `X^H K X = diag(|lambda|)`; the first `p` values are positive.
pub fn hyperbolic_eigen(k: &DenseMatrix, p: usize, q: usize) -> Result<(DenseMatrix, Vec<f64>)> {
    require_square(k)?;
    require_field(k, &[Field::R, Field::C])?;
    if k.rows() != p + q {
        return Err(Error::SizeMismatch(format!("p + q = {} for a {}x{} matrix", p + q, k.rows(), k.cols())));
    }
    let g = match k.field() {
        Field::R => cholesky_factor::<f64>(k)?,
        _ => cholesky_factor::<Complex64>(k)?,
    };
    let fe = hsvd(&g, p, q)?;
    let sig = crate::numeric::signature(k.field(), p, q);
    let x = &(&sig * &fe.k2[0].star()) * &sig;
    let lambda = fe.theta.iter().enumerate().map(|(i, t)| if i < p { (2.0 * t).exp() } else { -(2.0 * t).exp() }).collect();
    Ok((x, lambda))
}

/// Singular value decomposition of a real rectangular `X` read off the
/// hyperbolic CS decomposition of
/// `[[sqrt(I + X X^T), X], [X^T, sqrt(I + X^T X)]]`.
/// Returns `(U, sh, V)` with `X = U [diag(sh); 0] V^T` (or `[diag(sh), 0]`
/// when `X` is wide), `sh` descending.
pub fn nonsquare_svd(x: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    require_field(x, &[Field::R])?;
    let (p, q) = (x.rows(), x.cols());
    if p < q {
        let (u, sh, v) = nonsquare_svd(&x.t())?;
        return Ok((v, sh, u));
    }
    if q == 0 {
        return Ok((DenseMatrix::identity(Field::R, p), Vec::new(), DenseMatrix::identity(Field::R, 0)));
    }
    let xn = to_na::<f64>(x)?;
    let root = |m: DMatrix<f64>| {
        let (vals, vecs) = eigh_sorted(&m);
        let d = DMatrix::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().map(|v| v.max(0.0).sqrt())));
        &vecs * d * vecs.transpose()
    };
    let a = root(DMatrix::identity(p, p) + &xn * xn.transpose());
    let d = root(DMatrix::identity(q, q) + xn.transpose() * &xn);
    let mut b = DMatrix::zeros(p + q, p + q);
    b.view_mut((0, 0), (p, p)).copy_from(&a);
    b.view_mut((0, p), (p, q)).copy_from(&xn);
    b.view_mut((p, 0), (q, p)).copy_from(&xn.transpose());
    b.view_mut((p, p), (q, q)).copy_from(&d);
    let fe = hcsd(&from_na(&b), p, q)?;
    let sh = fe.theta.iter().map(|t| t.sinh()).collect();
    Ok((fe.k1[0].clone(), sh, fe.k2[1].t()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{rng_from_seed, GroupId};
    use crate::numeric::Quaternion;

    #[test]
    fn hsvd_diagonal_example() {
        let g = DenseMatrix::diag_real(Field::R, &[2.0, 3.0]);
        let fe = hsvd(&g, 1, 1).unwrap();
        assert!((fe.theta[0] - 2f64.ln()).abs() < 1e-14);
        assert!((fe.theta[1] - 3f64.ln()).abs() < 1e-14);
        assert!(fe.reconstruction_residual() < 1e-14);
    }

    #[test]
    fn hsvd_rejects_singular() {
        let g = DenseMatrix::diag_real(Field::R, &[1.0, 0.0, 2.0]);
        assert_eq!(hsvd(&g, 2, 1).unwrap_err(), Error::Singular);
    }

    #[test]
    fn hyperbolic_values_invariant_under_upq() {
        let mut rng = rng_from_seed(5);
        for field in [Field::R, Field::C] {
            let g = GroupId::gl(5, field).sample_group(&mut rng, 1.0);
            let w = GroupId::upq(3, 2, field).sample_group(&mut rng, 1.0);
            let a = hsvd(&g, 3, 2).unwrap();
            let b = hsvd(&(&g * &w), 3, 2).unwrap();
            for (x, y) in a.theta.iter().zip(&b.theta) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn hcsd_two_by_two() {
        let t = 0.8f64;
        let g = DenseMatrix::from_real(2, 2, &[t.cosh(), t.sinh(), t.sinh(), t.cosh()]);
        let fe = hcsd(&g, 1, 1).unwrap();
        assert!((fe.theta[0] - t).abs() < 1e-14);
        assert!(fe.reconstruction_residual() < 1e-13);
    }

    #[test]
    fn hcsd_sinh_matches_offdiagonal_singular_values() {
        let mut rng = rng_from_seed(6);
        let g = GroupId::upq(4, 2, Field::C).sample_group(&mut rng, 1.0);
        let fe = hcsd(&g, 4, 2).unwrap();
        let (_, sv, _) = svd_sorted(&to_na::<Complex64>(&g.submatrix(4, 0, 2, 4)).unwrap());
        for (t, s) in fe.theta.iter().zip(sv) {
            assert!((t.sinh() - s).abs() < 1e-10);
        }
        assert!(fe.reconstruction_residual() < 1e-10 * g.frobenius_norm());
    }

    #[test]
    fn hyperbolic_eigen_diagonal() {
        let k = DenseMatrix::diag_real(Field::R, &[4.0, 9.0]);
        let (x, lambda) = hyperbolic_eigen(&k, 1, 1).unwrap();
        assert!((lambda[0] - 4.0).abs() < 1e-12 && (lambda[1] + 9.0).abs() < 1e-12);
        assert!(x.distance(&DenseMatrix::identity(Field::R, 2)) < 1e-12);
    }

    #[test]
    fn hyperbolic_eigen_relation() {
        let mut rng = rng_from_seed(7);
        let m = GroupId::gl(4, Field::R).sample_group(&mut rng, 1.0);
        let k = &m.star() * &m;
        let (x, lambda) = hyperbolic_eigen(&k, 2, 2).unwrap();
        let sig = crate::numeric::signature(Field::R, 2, 2);
        let lam = DenseMatrix::diag_real(Field::R, &lambda);
        let lhs = &k * &x;
        let rhs = &(&sig * &x) * &lam;
        assert!(lhs.distance(&rhs) < 1e-9 * lhs.frobenius_norm());
        let oracle = {
            let ik = to_na::<f64>(&(&sig * &k)).unwrap();
            let mut ev: Vec<f64> = ik.complex_eigenvalues().iter().map(|z| z.re).collect();
            ev.sort_by(|a, b| b.total_cmp(a));
            ev
        };
        let mut got = lambda.clone();
        got.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in got.iter().zip(oracle) {
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0));
        }
    }

    #[test]
    fn nonsquare_examples() {
        let (_, sh, _) = nonsquare_svd(&DenseMatrix::from_real(1, 1, &[2.0])).unwrap();
        assert!((sh[0] - 2.0).abs() < 1e-13);
        let zero = DenseMatrix::zeros(Field::R, 3, 2);
        let (_, sh, _) = nonsquare_svd(&zero).unwrap();
        assert!(sh.iter().all(|s| s.abs() < 1e-14));
        let mut x = DenseMatrix::zeros(Field::R, 2, 3);
        x.set(0, 1, Quaternion::real(1.5));
        x.set(1, 2, Quaternion::real(-0.5));
        let (u, sh, v) = nonsquare_svd(&x).unwrap();
        let mut s = DenseMatrix::zeros(Field::R, 2, 3);
        for (i, &val) in sh.iter().enumerate() {
            s.set(i, i, Quaternion::real(val));
        }
        assert!((&(&u * &s) * &v.t()).distance(&x) < 1e-12);
    }
}
