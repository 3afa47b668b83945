//! Numerical decompositions for a subset of the cells, the folded
//! corollaries built on them, and the structure isomorphisms.

mod csd;
mod hyperbolic;
mod odo;
mod orthogonal;
mod structure;
mod svd;
mod symplectic;
mod takagi;

pub use csd::csd;
pub use hyperbolic::{hcsd, hsvd, hyperbolic_eigen, nonsquare_svd};
pub use odo::{joint_diagonalize, odo};
pub use orthogonal::complex_orthogonal_kak;
pub use structure::{
    conjugate_symplectic_svd, identity_residuals, perplectic_svd_complex, perplectic_svd_real, structure_isomorphism,
    Direction, IsoKind, StructuredSvd,
};
pub use svd::{svd_factor, svd_triplet};
pub use symplectic::{sympl_svd, williamson};
pub use takagi::{chol_complex_symmetric, takagi, uso_factor};

use crate::error::{Error, Result};
use crate::numeric::{DenseMatrix, Field};
use crate::registry::{FactoredElement, FactorizationSpec, Params};

/// Cells with a decomposition algorithm, as `(fid, beta)`.
pub const DECOMPOSABLE: [(u8, u8); 13] =
    [(1, 2), (4, 1), (4, 2), (7, 1), (7, 2), (7, 4), (9, 1), (9, 2), (10, 1), (13, 2), (18, 1), (18, 2), (23, 2)];

pub fn is_decomposable(fid: u8, beta: u8) -> bool {
    DECOMPOSABLE.contains(&(fid, beta))
}

/// Factors `g` according to `spec`.
pub fn decompose(spec: &FactorizationSpec, g: &DenseMatrix) -> Result<FactoredElement> {
    if !is_decomposable(spec.fid, spec.beta) {
        return Err(Error::Unsupported { fid: spec.fid, beta: spec.beta });
    }
    if g.rows() != spec.dim() || g.cols() != spec.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{} expects {}x{}, got {}x{}",
            spec.label(),
            spec.dim(),
            spec.dim(),
            g.rows(),
            g.cols()
        )));
    }
    let g = g.promote(spec.field())?;
    match (spec.fid, spec.params) {
        (1, _) => odo(&g),
        (4, Params::Pqrs { p, q, r, s }) => csd(&g, p, q, r, s),
        (7, _) => svd_factor(&g),
        (9, Params::Pq { p, q }) => hsvd(&g, p, q),
        (10, _) => sympl_svd(&g),
        (13, _) => uso_factor(&g),
        (18, Params::Pq { p, q }) => hcsd(&g, p, q),
        (23, _) => complex_orthogonal_kak(&g),
        (fid, _) => Err(Error::Unsupported { fid, beta: spec.beta }),
    }
}

pub(crate) fn require_square(g: &DenseMatrix) -> Result<()> {
    if !g.is_square() {
        return Err(Error::ShapeMismatch(format!("expected a square matrix, got {}x{}", g.rows(), g.cols())));
    }
    Ok(())
}

/// Membership slack for inputs: loose enough for matrices that went
/// through a text round-trip, tight enough to reject the wrong group.
pub(crate) fn input_tolerance(g: &DenseMatrix) -> f64 {
    1e-8 * g.rows().max(1) as f64 * g.frobenius_norm().powi(2).max(1.0)
}

pub(crate) fn require_member(spec: &FactorizationSpec, g: &DenseMatrix) -> Result<()> {
    let residual = spec.ambient.membership_residual(g)?;
    if residual.is_nan() || residual > input_tolerance(g) {
        return Err(if residual.is_infinite() { Error::Singular } else { Error::NotInGroup { residual } });
    }
    Ok(())
}

pub(crate) fn require_field(g: &DenseMatrix, allowed: &[Field]) -> Result<()> {
    if !allowed.contains(&g.field()) {
        return Err(Error::WrongField { expected: allowed[allowed.len() - 1], found: g.field() });
    }
    Ok(())
}

pub(crate) fn finish(
    spec: &FactorizationSpec,
    k1: Vec<DenseMatrix>,
    theta: Vec<f64>,
    k2: Vec<DenseMatrix>,
    g: &DenseMatrix,
) -> FactoredElement {
    FactoredElement { spec: spec.clone(), k1, theta, k2, g: g.clone() }
}

/// Which side of `g = k1 a k2` is collapsed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldSide {
    /// `g tau(g)^{-1} = k1 a^2 tau(k1)^{-1}`
    Right,
    /// `sigma(g)^{-1} g = sigma(k2)^{-1} a^2 k2`
    Left,
}

impl std::str::FromStr for FoldSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "right" => Ok(FoldSide::Right),
            "left" => Ok(FoldSide::Left),
            other => Err(Error::Parse(format!("fold side must be left or right, got {other:?}"))),
        }
    }
}

/// Output of [`fold`].
#[derive(Clone, Debug, PartialEq)]
pub struct Folded {
    /// `g tau(g)^{-1}` or `sigma(g)^{-1} g`.
    pub matrix: DenseMatrix,
    /// The surviving factor, `k1` or `k2`, embedded.
    pub conjugator: DenseMatrix,
    pub squared_middle: DenseMatrix,
    /// `||matrix - rebuilt||_F` with `rebuilt` assembled from the factors.
    pub residual: f64,
}

pub fn fold(fe: &FactoredElement, side: FoldSide) -> Result<Folded> {
    let a = fe.middle();
    let a2 = &a * &a;
    let (matrix, conjugator, rebuilt) = match side {
        FoldSide::Right => {
            let tau = fe.spec.tau();
            let k1 = fe.k1_embedded();
            let m = &fe.g * &tau.apply_group_inverse(&fe.g)?;
            let r = &(&k1 * &a2) * &tau.apply_group_inverse(&k1)?;
            (m, k1, r)
        }
        FoldSide::Left => {
            let sigma = fe.spec.sigma();
            let k2 = fe.k2_embedded();
            let m = &sigma.apply_group_inverse(&fe.g)? * &fe.g;
            let r = &(&sigma.apply_group_inverse(&k2)? * &a2) * &k2;
            (m, k2, r)
        }
    };
    let residual = matrix.distance(&rebuilt);
    Ok(Folded { matrix, conjugator, squared_middle: a2, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::rng_from_seed;
    use crate::registry::{cells, spec};

    #[test]
    fn fold_identities_on_every_cell() {
        let mut rng = rng_from_seed(3);
        for (fid, beta) in cells() {
            for params in Params::variants(fid, 3) {
                let s = spec(fid, beta, params).unwrap();
                let fe = s.sample_factored(&mut rng, 0.7).unwrap();
                let bound = 1e-9 * fe.g.frobenius_norm().powi(2);
                for side in [FoldSide::Right, FoldSide::Left] {
                    let f = fold(&fe, side).unwrap();
                    assert!(f.residual <= bound, "{} {side:?}: {}", s.label(), f.residual);
                }
            }
        }
    }

    #[test]
    fn svd_right_fold_is_eigendecomposition() {
        let mut rng = rng_from_seed(4);
        let s = spec(7, 1, Params::N { n: 4 }).unwrap();
        let fe = s.sample_factored(&mut rng, 1.0).unwrap();
        let f = fold(&fe, FoldSide::Right).unwrap();
        assert!(f.matrix.distance(&(&fe.g * &fe.g.t())) < 1e-10 * f.matrix.frobenius_norm());
    }

    #[test]
    fn zero_angles_fold_to_identity_middle() {
        let s = spec(9, 2, Params::Pq { p: 2, q: 1 }).unwrap();
        let k = DenseMatrix::identity(Field::C, 3);
        let g = s.compose(std::slice::from_ref(&k), &[0.0; 3], std::slice::from_ref(&k)).unwrap();
        let fe = FactoredElement { spec: s, k1: vec![g.clone()], theta: vec![0.0; 3], k2: vec![g.clone()], g };
        let f = fold(&fe, FoldSide::Right).unwrap();
        assert!(f.squared_middle.distance(&DenseMatrix::identity(Field::C, 3)) < 1e-15);
    }

    #[test]
    fn unsupported_cell() {
        let s = spec(2, 1, Params::N { n: 2 }).unwrap();
        let g = DenseMatrix::identity(Field::R, 4);
        assert_eq!(decompose(&s, &g), Err(Error::Unsupported { fid: 2, beta: 1 }));
    }
}
