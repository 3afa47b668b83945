//! Scalars, dense matrices over R, C and H, and the numeric kernels the
//! rest of the crate is built on.

mod linalg;
mod matrix;
mod quaternion;

pub use linalg::{
    complete_basis, eigh_sorted, exp, exp_with_defect, from_na, inverse, log_near_identity, orthonormalize_columns,
    polar_unitary, svd_sorted, to_complex_na, to_na, unitarity_defect, NaScalar,
};
pub use matrix::{exchange, signature, symplectic_j, DenseMatrix, Field, TransposeKind};
pub use quaternion::{Quaternion, Unit};

/// Matrix product over the wider of the two fields.
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> crate::Result<DenseMatrix> {
    a.try_mul(b)
}

pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    m.frobenius_norm()
}

pub fn transpose(m: &DenseMatrix, kind: TransposeKind) -> crate::Result<DenseMatrix> {
    m.transpose(kind)
}

pub fn realify(m: &DenseMatrix) -> crate::Result<DenseMatrix> {
    m.realify()
}

pub fn complexify(m: &DenseMatrix) -> DenseMatrix {
    m.complexify()
}
