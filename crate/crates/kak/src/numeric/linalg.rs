//! Bridges to nalgebra for the dense kernels (LU, SVD, Hermitian eigen,
//! matrix exponential) plus a few small orthogonalization helpers.

use nalgebra::{ComplexField, DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use super::matrix::{DenseMatrix, Field};
use super::quaternion::Quaternion;
use crate::error::{Error, Result};

/// Scalars that nalgebra can factor and that embed into the quaternions.
pub trait NaScalar: ComplexField<RealField = f64> + Copy {
    const FIELD: Field;
    fn from_quat(q: Quaternion) -> Self;
    fn to_quat(self) -> Quaternion;
    fn from_c64(c: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
}

impl NaScalar for f64 {
    const FIELD: Field = Field::R;
    fn from_quat(q: Quaternion) -> Self {
        q.w
    }
    fn to_quat(self) -> Quaternion {
        Quaternion::real(self)
    }
    fn from_c64(c: Complex64) -> Self {
        c.re
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl NaScalar for Complex64 {
    const FIELD: Field = Field::C;
    fn from_quat(q: Quaternion) -> Self {
        q.complex_part()
    }
    fn to_quat(self) -> Quaternion {
        Quaternion::from_complex(self)
    }
    fn from_c64(c: Complex64) -> Self {
        c
    }
    fn to_c64(self) -> Complex64 {
        self
    }
}

pub fn to_na<T: NaScalar>(m: &DenseMatrix) -> Result<DMatrix<T>> {
    if m.field() > T::FIELD {
        return Err(Error::WrongField { expected: T::FIELD, found: m.field() });
    }
    Ok(DMatrix::from_fn(m.rows(), m.cols(), |i, j| T::from_quat(m.get(i, j))))
}

pub fn from_na<T: NaScalar>(m: &DMatrix<T>) -> DenseMatrix {
    DenseMatrix::from_fn(T::FIELD, m.nrows(), m.ncols(), |i, j| m[(i, j)].to_quat())
}

/// Complex nalgebra copy of a real or complex matrix; quaternion
/// matrices go through `complexify` first.
pub fn to_complex_na(m: &DenseMatrix) -> DMatrix<Complex64> {
    let src = if m.field() == Field::H { m.complexify() } else { m.clone() };
    DMatrix::from_fn(src.rows(), src.cols(), |i, j| src.get(i, j).complex_part())
}

pub fn inverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
    }
    match m.field() {
        Field::R => to_na::<f64>(m)?.try_inverse().map(|x| from_na(&x)).ok_or(Error::Singular),
        Field::C => to_na::<Complex64>(m)?.try_inverse().map(|x| from_na(&x)).ok_or(Error::Singular),
        Field::H => {
            let inv = to_complex_na(m).try_inverse().ok_or(Error::Singular)?;
            from_na(&inv).decomplexify()
        }
    }
}

/// Matrix exponential. Real input stays real; quaternion input is
/// exponentiated through its complex representation.
pub fn exp(m: &DenseMatrix) -> Result<DenseMatrix> {
    exp_with_defect(m).map(|(e, _)| e)
}

/// Like [`exp`], also returning the distance of the complexified result
/// from the quaternion structure before it is folded back (zero for `R`, `C`).
pub fn exp_with_defect(m: &DenseMatrix) -> Result<(DenseMatrix, f64)> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("exp of a non-square matrix".into()));
    }
    if m.rows() == 0 {
        return Ok((m.clone(), 0.0));
    }
    match m.field() {
        Field::R => Ok((from_na(&to_na::<f64>(m)?.exp()), 0.0)),
        Field::C => Ok((from_na(&to_na::<Complex64>(m)?.exp()), 0.0)),
        Field::H => {
            let e = from_na(&to_complex_na(m).exp());
            let defect = e.complex_structure_defect();
            Ok((e.decomplexify()?, defect))
        }
    }
}

/// Principal logarithm of a matrix close to the identity via the
/// Mercator series. Intended for `||M - I|| < 1/2`.
pub fn log_near_identity(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.rows();
    let e = m - &DenseMatrix::identity(m.field(), n);
    if e.frobenius_norm() >= 0.9 {
        return Err(Error::SizeMismatch("log_near_identity: input too far from identity".into()));
    }
    let mut acc = e.clone();
    let mut power = e.clone();
    for k in 2..400 {
        power = &power * &e;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let term = power.scale(sign / k as f64);
        acc = &acc + &term;
        if term.frobenius_norm() < 1e-18 {
            break;
        }
    }
    Ok(acc)
}

/// Thin SVD with singular values in descending order.
pub fn svd_sorted<T: NaScalar>(m: &DMatrix<T>) -> (DMatrix<T>, Vec<f64>, DMatrix<T>) {
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    (u, svd.singular_values.iter().copied().collect(), vt)
}

/// Hermitian eigendecomposition with eigenvalues ascending.
pub fn eigh_sorted<T: NaScalar>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let sym = (m + m.adjoint()) * T::from_real(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Nearest unitary matrix in the Frobenius norm.
pub fn polar_unitary<T: NaScalar>(m: &DMatrix<T>) -> DMatrix<T> {
    if m.is_empty() {
        return m.clone();
    }
    let (u, _, vt) = svd_sorted(m);
    u * vt
}

/// Extends the orthonormal columns of `q` (n x k) to an n x n unitary
/// matrix, picking standard basis vectors greedily by residual norm.
pub fn complete_basis<T: NaScalar>(q: &DMatrix<T>) -> DMatrix<T> {
    let n = q.nrows();
    let mut cols: Vec<nalgebra::DVector<T>> = q.column_iter().map(|c| c.into_owned()).collect();
    while cols.len() < n {
        let mut best: Option<(f64, nalgebra::DVector<T>)> = None;
        for e in 0..n {
            let mut v = nalgebra::DVector::<T>::zeros(n);
            v[e] = T::one();
            for _ in 0..2 {
                for c in &cols {
                    let proj = c.dotc(&v);
                    v -= c * proj;
                }
            }
            let nv = v.norm();
            if best.as_ref().is_none_or(|(b, _)| nv > *b) {
                best = Some((nv, v));
            }
        }
        let (nv, v) = best.expect("n > 0");
        cols.push(v / T::from_real(nv));
    }
    DMatrix::from_columns(&cols)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
/// vanish against their predecessors are refilled in place from the
/// completion of the surviving ones.
pub fn orthonormalize_columns<T: NaScalar>(m: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let n = m.nrows();
    let mut cols: Vec<nalgebra::DVector<T>> = Vec::new();
    let mut slots: Vec<Option<usize>> = Vec::new();
    for c in m.column_iter() {
        let mut v = c.into_owned();
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let nv = v.norm();
        if nv > tol {
            slots.push(Some(cols.len()));
            cols.push(v / T::from_real(nv));
        } else {
            slots.push(None);
        }
    }
    let k = cols.len();
    if k == slots.len() {
        return if k == 0 { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) };
    }
    let partial = if k == 0 { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) };
    let full = complete_basis(&partial);
    let mut extra = k;
    let mut out = DMatrix::zeros(n, slots.len());
    for (j, slot) in slots.iter().enumerate() {
        let src = slot.unwrap_or_else(|| {
            extra += 1;
            extra - 1
        });
        out.set_column(j, &full.column(src));
    }
    out
}

/// `||M^H M - I||_F`.
pub fn unitarity_defect<T: NaScalar>(m: &DMatrix<T>) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - DMatrix::<T>::identity(n, n)).norm()
}
