//! Isomorphisms onto the perplectic and conjugate symplectic groups, the
//! structured SVDs they induce, and the realify/complexify identities.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{hcsd, input_tolerance, complex_orthogonal_kak, require_square};
use crate::error::{Error, Result};
use crate::groups::GroupId;
use crate::numeric::{exchange, signature, symplectic_j, DenseMatrix, Field, Quaternion, TransposeKind, Unit};

/// One of the three conjugations between classical groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoKind {
    /// `O(m1, m2) -> {G : G^T E G = E}` over R, `m1 = ceil(n/2)`.
    RealPerplectic { n: usize },
    /// Complex orthogonal `-> {G : G^T E G = E}` over C.
    ComplexPerplectic { n: usize },
    /// `U(n, n) -> {G : G^H J G = J}`, matrices of size `2n`.
    ConjugateSymplectic { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `M -> V M V^H`
    Forward,
    /// `M -> V^H M V`
    Inverse,
}

impl IsoKind {
    pub fn size(self) -> usize {
        match self {
            IsoKind::RealPerplectic { n } | IsoKind::ComplexPerplectic { n } => n,
            IsoKind::ConjugateSymplectic { n } => 2 * n,
        }
    }

    pub fn field(self) -> Field {
        match self {
            IsoKind::RealPerplectic { .. } => Field::R,
            _ => Field::C,
        }
    }

    /// The unitary `V` of the conjugation.
    pub fn matrix(self) -> DenseMatrix {
        match self {
            IsoKind::RealPerplectic { n } => {
                let (m1, m2) = (n.div_ceil(2), n / 2);
                let mut v = (&signature(Field::R, m1, m2) + &exchange(Field::R, n)).scale(FRAC_1_SQRT_2);
                if n % 2 == 1 {
                    v.set(m2, m2, Quaternion::ONE);
                }
                v
            }
            IsoKind::ComplexPerplectic { n } => {
                let a = Quaternion::new(0.5, 0.5, 0.0, 0.0);
                let b = Quaternion::new(0.5, -0.5, 0.0, 0.0);
                let mut v = DenseMatrix::zeros(Field::C, n, n);
                for i in 0..n {
                    v.set(i, i, a);
                    let j = n - 1 - i;
                    v.set(i, j, v.get(i, j) + b);
                }
                v
            }
            IsoKind::ConjugateSymplectic { n } => {
                let mut v = DenseMatrix::identity(Field::C, 2 * n).scale(FRAC_1_SQRT_2);
                let mi = Quaternion::new(0.0, -FRAC_1_SQRT_2, 0.0, 0.0);
                for i in 0..n {
                    v.set(i, n + i, mi);
                    v.set(n + i, i, mi);
                }
                v
            }
        }
    }

    /// The group on the source side of [`Direction::Forward`].
    pub fn source_group(self) -> GroupId {
        match self {
            IsoKind::RealPerplectic { n } => GroupId::upq(n.div_ceil(2), n / 2, Field::R),
            IsoKind::ComplexPerplectic { n } => GroupId::orth(n, Field::C, Unit::I),
            IsoKind::ConjugateSymplectic { n } => GroupId::upq(n, n, Field::C),
        }
    }

    /// `||G^T E G - E||` (perplectic) or `||G^H J G - J||`.
    pub fn target_residual(self, g: &DenseMatrix) -> f64 {
        let (form, kind) = match self {
            IsoKind::RealPerplectic { n } => (exchange(Field::R, n), TransposeKind::T),
            IsoKind::ComplexPerplectic { n } => (exchange(Field::C, n), TransposeKind::T),
            IsoKind::ConjugateSymplectic { n } => (symplectic_j(Field::C, n), TransposeKind::H),
        };
        let gt = g.promote(self.field()).and_then(|m| m.transpose(kind));
        match gt {
            Ok(gt) => (&(&gt * &form) * g).distance(&form),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn source_residual(self, g: &DenseMatrix) -> f64 {
        self.source_group().membership_residual(g).unwrap_or(f64::INFINITY)
    }
}

/// Conjugates `m` by the isomorphism's `V`. The input must belong to the
/// side the map starts from.
pub fn structure_isomorphism(kind: IsoKind, m: &DenseMatrix, direction: Direction) -> Result<DenseMatrix> {
    require_square(m)?;
    if m.rows() != kind.size() {
        return Err(Error::SizeMismatch(format!("{kind:?} acts on size {}, got {}", kind.size(), m.rows())));
    }
    let residual = match direction {
        Direction::Forward => kind.source_residual(m),
        Direction::Inverse => kind.target_residual(m),
    };
    if residual.is_nan() || residual > input_tolerance(m) {
        return Err(Error::NotInGroup { residual });
    }
    Ok(conjugate(kind, m, direction))
}

fn conjugate(kind: IsoKind, m: &DenseMatrix, direction: Direction) -> DenseMatrix {
    let v = kind.matrix();
    let m = m.promote(kind.field()).expect("R and C promote upward");
    match direction {
        Direction::Forward => &(&v * &m) * &v.star(),
        Direction::Inverse => &(&v.star() * &m) * &v,
    }
}

/// `G = U Sigma W` with all three factors in the structured group, `U`
/// and `W` unitary, and `Sigma` diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredSvd {
    pub u: DenseMatrix,
    pub sigma: DenseMatrix,
    pub w: DenseMatrix,
    /// Diagonal of `sigma`.
    pub values: Vec<f64>,
    /// Off-diagonal mass of `sigma` before it was read off.
    pub off_diagonal: f64,
}

impl StructuredSvd {
    pub fn reconstruction_residual(&self, g: &DenseMatrix) -> f64 {
        (&(&self.u * &self.sigma) * &self.w).distance(g)
    }
}

fn permutation(field: Field, n: usize, to: impl Fn(usize) -> usize) -> DenseMatrix {
    let mut p = DenseMatrix::zeros(field, n, n);
    for i in 0..n {
        p.set(to(i), i, Quaternion::ONE);
    }
    p
}

fn assemble(kind: IsoKind, k1: &DenseMatrix, a: &DenseMatrix, k2: &DenseMatrix, p: &DenseMatrix) -> StructuredSvd {
    // k1 a k2 = (k1 P^T)(P a P^T)(P k2), each piece mapped forward.
    let u = conjugate(kind, &(k1 * &p.star()), Direction::Forward);
    let sigma_full = conjugate(kind, &(&(p * a) * &p.star()), Direction::Forward);
    let w = conjugate(kind, &(p * k2), Direction::Forward);
    let n = sigma_full.rows();
    let values: Vec<f64> = (0..n).map(|i| sigma_full.get(i, i).w).collect();
    let sigma = DenseMatrix::diag_real(kind.field(), &values);
    let off_diagonal = sigma_full.distance(&sigma);
    StructuredSvd { u, sigma, w, values, off_diagonal }
}

/// SVD of a real perplectic matrix inside the perplectic group. The
/// values come out as `(s_1, .., s_m, [1], 1/s_m, .., 1/s_1)`.
pub fn perplectic_svd_real(g: &DenseMatrix) -> Result<StructuredSvd> {
    require_square(g)?;
    let n = g.rows();
    let kind = IsoKind::RealPerplectic { n };
    let h = structure_isomorphism(kind, g, Direction::Inverse)?;
    let (m1, m2) = (n.div_ceil(2), n / 2);
    let fe = hcsd(&h, m1, m2)?;
    // Pairs (k, m1 + k) of the hyperbolic block become (k, n - 1 - k).
    let p = permutation(Field::R, n, |i| if i < m1 { i } else { n - 1 - (i - m1) });
    Ok(assemble(kind, &fe.k1_embedded(), &fe.middle(), &fe.k2_embedded(), &p))
}

/// SVD of a complex perplectic matrix inside the perplectic group, via
/// the complex orthogonal decomposition.
pub fn perplectic_svd_complex(g: &DenseMatrix) -> Result<StructuredSvd> {
    require_square(g)?;
    let n = g.rows();
    let kind = IsoKind::ComplexPerplectic { n };
    let h = structure_isomorphism(kind, g, Direction::Inverse)?;
    let fe = complex_orthogonal_kak(&h)?;
    // Pair (off + 2k, off + 2k + 1) goes to (n - 1 - k, k); a lone index to the middle.
    let (m, off) = (n / 2, n % 2);
    let p = permutation(Field::C, n, |i| {
        if i < off {
            m
        } else {
            let k = (i - off) / 2;
            if (i - off) % 2 == 0 {
                n - 1 - k
            } else {
                k
            }
        }
    });
    Ok(assemble(kind, &fe.k1_embedded(), &fe.middle(), &fe.k2_embedded(), &p))
}

/// SVD of a conjugate symplectic matrix of size `2n`. The values come out
/// as `(s_1, .., s_n, 1/s_1, .., 1/s_n)`.
pub fn conjugate_symplectic_svd(g: &DenseMatrix) -> Result<StructuredSvd> {
    require_square(g)?;
    if !g.rows().is_multiple_of(2) {
        return Err(Error::SizeMismatch(format!("conjugate symplectic SVD needs even size, got {}", g.rows())));
    }
    let n = g.rows() / 2;
    let kind = IsoKind::ConjugateSymplectic { n };
    let h = structure_isomorphism(kind, g, Direction::Inverse)?;
    let fe = hcsd(&h, n, n)?;
    // diag(I, i I) turns the real hyperbolic blocks into ones V diagonalizes.
    let mut d = DenseMatrix::identity(Field::C, 2 * n);
    for i in n..2 * n {
        d.set(i, i, Quaternion::I);
    }
    Ok(assemble(kind, &fe.k1_embedded(), &fe.middle(), &fe.k2_embedded(), &d))
}

/// Residuals of the six realify/complexify identities for complex `c` and
/// quaternion `q`, all square of size `n`:
///
/// 0. `realify(C^H) = realify(C)^T`
/// 1. `realify(C^T) = I_nn realify(C)^T I_nn`
/// 2. `complexify(Q^D) = complexify(Q)^H`
/// 3. `complexify(Q^{D_j}) = complexify(Q)^T = -J complexify(Q)^H J`
/// 4. `-J realify(C) J = realify(C)`
/// 5. `-J conj(complexify(Q)) J = complexify(Q)`
pub fn identity_residuals(c: &DenseMatrix, q: &DenseMatrix) -> Result<[f64; 6]> {
    require_square(c)?;
    require_square(q)?;
    let c = c.promote(Field::C)?;
    let q = q.promote(Field::H)?;
    let (n, m) = (c.rows(), q.rows());
    let rc = c.realify()?;
    let inn = signature(Field::R, n, n);
    let jr = symplectic_j(Field::R, n);
    let cq = q.complexify();
    let jc = symplectic_j(Field::C, m);
    let neg_j_conj = |x: &DenseMatrix, j: &DenseMatrix| (&(j * x) * j).scale(-1.0);
    let dj = q.transpose(TransposeKind::DUnit(Unit::J))?.complexify();
    Ok([
        c.star().realify()?.distance(&rc.t()),
        c.t().realify()?.distance(&(&(&inn * &rc.t()) * &inn)),
        q.star().complexify().distance(&cq.star()),
        dj.distance(&cq.t()) + cq.t().distance(&neg_j_conj(&cq.star(), &jc)),
        neg_j_conj(&rc, &jr).distance(&rc),
        neg_j_conj(&cq.conj(), &jc).distance(&cq),
    ])
}
