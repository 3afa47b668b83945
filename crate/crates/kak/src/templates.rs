//! Auxiliary matrices, block permutations and the structured middle
//! factors `a(theta)` of every factorization.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numeric::{DenseMatrix, Field, Quaternion, Unit};

/// Where the angle vector of a cell lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AngleDomain {
    /// `[0, pi)`
    ZeroPi,
    /// `[0, pi/2)`
    ZeroHalfPi,
    /// Any real value; canonical forms are non-negative where the
    /// template is invariant under sign flips.
    RealCanonical,
}

impl AngleDomain {
    pub fn contains(self, t: f64) -> bool {
        match self {
            AngleDomain::ZeroPi => (0.0..PI).contains(&t),
            AngleDomain::ZeroHalfPi => (0.0..FRAC_PI_2).contains(&t),
            AngleDomain::RealCanonical => t.is_finite(),
        }
    }

    /// Number of angles outside the domain.
    pub fn violations(self, theta: &[f64]) -> usize {
        theta.iter().filter(|t| !self.contains(**t)).count()
    }

    pub fn check(self, theta: &[f64]) -> Result<()> {
        match theta.iter().position(|t| !self.contains(*t)) {
            Some(index) => Err(Error::DomainViolation { index, value: theta[index] }),
            None => Ok(()),
        }
    }
}

/// The auxiliary matrix families. Sizes that are not implied by the angle
/// vector are carried in the variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxKind {
    C,
    S,
    /// `diag(e^{eta theta})`, complex for `eta = i`, quaternion otherwise.
    D(Unit),
    /// Block rotations of size `n` with `floor(n/2)` angles.
    R { n: usize },
    Ch,
    Sh,
    Sigma,
    /// Hyperbolic blocks `[[ch, eta sh], [-eta sh, ch]]` of size `n`.
    B { n: usize, unit: Unit },
    /// `[[Ch, 0, Sh], [0, I, 0], [Sh, 0, Ch]]` of size `m + n`, `m >= n`.
    H { m: usize, n: usize },
}

impl AuxKind {
    pub fn angle_count(self, len_hint: usize) -> usize {
        match self {
            AuxKind::R { n } | AuxKind::B { n, .. } => n / 2,
            AuxKind::H { n, .. } => n,
            _ => len_hint,
        }
    }
}

fn check_len(theta: &[f64], expected: usize, what: &str) -> Result<()> {
    if theta.len() != expected {
        return Err(Error::SizeMismatch(format!("{what} needs {expected} angles, got {}", theta.len())));
    }
    Ok(())
}

fn unit_field(unit: Unit) -> Field {
    match unit {
        Unit::I => Field::C,
        Unit::J => Field::H,
    }
}

/// Builds one of the auxiliary matrices.
pub fn aux_matrix(kind: AuxKind, theta: &[f64]) -> Result<DenseMatrix> {
    let diag = |f: fn(f64) -> f64| DenseMatrix::diag_real(Field::R, &theta.iter().map(|&t| f(t)).collect::<Vec<_>>());
    Ok(match kind {
        AuxKind::C => diag(f64::cos),
        AuxKind::S => diag(f64::sin),
        AuxKind::Ch => diag(f64::cosh),
        AuxKind::Sh => diag(f64::sinh),
        AuxKind::Sigma => diag(f64::exp),
        AuxKind::D(unit) => {
            let e = unit.quaternion();
            let d: Vec<Quaternion> = theta.iter().map(|&t| Quaternion::real(t.cos()) + e * t.sin()).collect();
            DenseMatrix::diag(unit_field(unit), &d)
        }
        AuxKind::R { n } => {
            check_len(theta, n / 2, "R")?;
            paired_blocks(Field::R, n, theta, |t| {
                let (c, s) = (t.cos(), t.sin());
                [[c, s], [-s, c]].map(|r| r.map(Quaternion::real))
            })
        }
        AuxKind::B { n, unit } => {
            check_len(theta, n / 2, "B")?;
            let e = unit.quaternion();
            paired_blocks(unit_field(unit), n, theta, |t| {
                let (c, s) = (Quaternion::real(t.cosh()), e * t.sinh());
                [[c, s], [-s, c]]
            })
        }
        AuxKind::H { m, n } => {
            check_len(theta, n, "H")?;
            if m < n {
                return Err(Error::BadPartition(format!("H needs m >= n, got m = {m}, n = {n}")));
            }
            hyperbolic_block(Field::R, m, n, theta, Quaternion::ONE)
        }
    })
}

/// `2x2` blocks down the diagonal, preceded by a lone `1` when `n` is odd.
fn paired_blocks(field: Field, n: usize, theta: &[f64], block: impl Fn(f64) -> [[Quaternion; 2]; 2]) -> DenseMatrix {
    let mut m = DenseMatrix::identity(field, n);
    let off = n % 2;
    for (k, &t) in theta.iter().enumerate() {
        let b = block(t);
        let r = off + 2 * k;
        for (i, row) in b.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(r + i, r + j, *v);
            }
        }
    }
    m
}

/// `[[Ch, 0, eta Sh], [0, I, 0], [conj(eta) Sh, 0, Ch]]`-type block of size
/// `m + n` with layout `(n, m - n, n)`. With `eta = 1` this is `H_{m,n}`.
fn hyperbolic_block(field: Field, m: usize, n: usize, theta: &[f64], eta: Quaternion) -> DenseMatrix {
    let size = m + n;
    let mut out = DenseMatrix::identity(field, size);
    for (k, &t) in theta.iter().enumerate() {
        let (c, s) = (t.cosh(), t.sinh());
        let a = k;
        let b = m + k;
        out.set(a, a, Quaternion::real(c));
        out.set(b, b, Quaternion::real(c));
        out.set(a, b, eta * s);
        out.set(b, a, eta.conj() * s);
    }
    out
}

/// Block permutations used to move between block layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermKind {
    /// Rows in blocks `(p, p, q, q)`, columns in blocks `(p, q, p, q)`.
    Ppq { p: usize, q: usize },
    /// Columns `(p1, p2, q1, q2)` to rows `(p1, q1, p2, q2)`.
    P1 { p1: usize, q1: usize, p2: usize, q2: usize },
    /// Columns `(p1, p2, q1, q2)` to rows `(p1, q2, p2, q1)`.
    P2 { p1: usize, q1: usize, p2: usize, q2: usize },
}

impl PermKind {
    /// For each row block, the index of the column block holding its identity.
    fn layout(self) -> (Vec<usize>, Vec<usize>) {
        match self {
            PermKind::Ppq { p, q } => (vec![p, q, p, q], vec![0, 2, 1, 3]),
            PermKind::P1 { p1, q1, p2, q2 } => (vec![p1, p2, q1, q2], vec![0, 2, 1, 3]),
            PermKind::P2 { p1, q1, p2, q2 } => (vec![p1, p2, q1, q2], vec![0, 3, 1, 2]),
        }
    }

    /// Index map: row `r` of the matrix has its single `1` in column `map[r]`.
    pub fn index_map(self) -> Vec<usize> {
        let (widths, order) = self.layout();
        let starts: Vec<usize> = widths.iter().scan(0, |acc, w| {
            let s = *acc;
            *acc += w;
            Some(s)
        }).collect();
        order.iter().flat_map(|&b| starts[b]..starts[b] + widths[b]).collect()
    }

    pub fn size(self) -> usize {
        self.layout().0.iter().sum()
    }
}

/// The real permutation matrix for `kind`.
pub fn block_permutation(kind: PermKind) -> DenseMatrix {
    let map = kind.index_map();
    let mut m = DenseMatrix::zeros(Field::R, map.len(), map.len());
    for (r, &c) in map.iter().enumerate() {
        m.set(r, c, Quaternion::ONE);
    }
    m
}

/// `P^T * A * P` computed by index shuffling.
pub fn conjugate_by_perm(a: &DenseMatrix, kind: PermKind) -> DenseMatrix {
    let map = kind.index_map();
    let mut inv = vec![0; map.len()];
    for (r, &c) in map.iter().enumerate() {
        inv[c] = r;
    }
    DenseMatrix::from_fn(a.field(), a.rows(), a.cols(), |i, j| a.get(inv[i], inv[j]))
}

/// `P * A * P^T` computed by index shuffling.
pub fn conjugate_by_perm_inv(a: &DenseMatrix, kind: PermKind) -> DenseMatrix {
    let map = kind.index_map();
    DenseMatrix::from_fn(a.field(), a.rows(), a.cols(), |i, j| a.get(map[i], map[j]))
}

/// Shape of the middle factor of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Template {
    /// `diag(e^{eta theta})`, `n` angles.
    UnitDiag { n: usize, unit: Unit },
    /// `diag(R, R^{-1})`, `floor(n/2)` angles, size `2n`.
    RotPair { n: usize },
    /// `diag(D, D)` with `D = diag(e^{i theta})`, size `2n`.
    DiagPair { n: usize },
    /// Cosine-sine block for `(p, q; r, s)`, `s` angles.
    CsBlock { p: usize, q: usize, r: usize, s: usize },
    /// `[[C, 0, eta S], [0, I, 0], [eta S, 0, C]]`, `q` angles.
    ImagCs { p: usize, q: usize, unit: Unit },
    /// Cosine-sine block in Kronecker form, size `2(p + q)`, `q` angles.
    KronCs { p: usize, q: usize },
    /// `diag(e^theta)`, `n` angles.
    Sigma { n: usize },
    /// `diag(e^theta)` whose first `p` and last `q` entries are ordered separately.
    SigmaSplit { p: usize, q: usize },
    /// `H_{p,q}`, `q` angles.
    HypBlock { p: usize, q: usize },
    /// `diag(Sigma, Sigma)`.
    SigmaPair { n: usize },
    /// `diag(Sigma, Sigma^{-1})`.
    SigmaInvPair { n: usize },
    /// `B^eta` of size `n`, `floor(n/2)` angles.
    BBlock { n: usize, unit: Unit },
    /// `[[Ch, Sh], [Sh, Ch]]`, size `2n`.
    HypHalves { n: usize },
    /// `diag(H_{p,q}, H_{p,q}^{-1})`, size `2(p + q)`, `q` angles.
    HypPairInv { p: usize, q: usize },
    /// `[[Ch, eta Sh], [-eta Sh, Ch]]`, size `2n`.
    ImagHypHalves { n: usize, unit: Unit },
    /// `[[Ch, 0, eta Sh], [0, I, 0], [-eta Sh, 0, Ch]]`, `q` angles.
    ImagHypBlock { p: usize, q: usize, unit: Unit },
    /// Two hyperbolic blocks interleaved by `P2`.
    TwoHyp { p1: usize, q1: usize, p2: usize, q2: usize },
    /// Hyperbolic pairs with angles `(theta, -theta)` on the doubled
    /// `(2p, 2q)` split, in the `(p, p, q, q)` layout.
    DoubledHyp { p: usize, q: usize },
}

impl Template {
    pub fn angle_count(&self) -> usize {
        match *self {
            Template::UnitDiag { n, .. }
            | Template::DiagPair { n }
            | Template::Sigma { n }
            | Template::SigmaPair { n }
            | Template::SigmaInvPair { n }
            | Template::HypHalves { n }
            | Template::ImagHypHalves { n, .. } => n,
            Template::RotPair { n } | Template::BBlock { n, .. } => n / 2,
            Template::CsBlock { s, .. } => s,
            Template::ImagCs { q, .. }
            | Template::KronCs { q, .. }
            | Template::HypBlock { q, .. }
            | Template::HypPairInv { q, .. }
            | Template::ImagHypBlock { q, .. }
            | Template::DoubledHyp { q, .. } => q,
            Template::SigmaSplit { p, q } => p + q,
            Template::TwoHyp { p1, q1, p2, q2 } => p1.min(q2) + p2.min(q1),
        }
    }

    /// Side length of the middle factor.
    pub fn dim(&self) -> usize {
        match *self {
            Template::UnitDiag { n, .. } | Template::Sigma { n } | Template::BBlock { n, .. } => n,
            Template::RotPair { n }
            | Template::DiagPair { n }
            | Template::SigmaPair { n }
            | Template::SigmaInvPair { n }
            | Template::HypHalves { n }
            | Template::ImagHypHalves { n, .. } => 2 * n,
            Template::CsBlock { p, q, .. }
            | Template::ImagCs { p, q, .. }
            | Template::HypBlock { p, q }
            | Template::SigmaSplit { p, q }
            | Template::ImagHypBlock { p, q, .. } => p + q,
            Template::KronCs { p, q } | Template::HypPairInv { p, q } | Template::DoubledHyp { p, q } => 2 * (p + q),
            Template::TwoHyp { p1, q1, p2, q2 } => p1 + q1 + p2 + q2,
        }
    }

    /// Whether `theta -> |theta|` leaves the factor's double coset unchanged.
    pub fn sign_invariant(&self) -> bool {
        matches!(
            self,
            Template::HypBlock { .. }
                | Template::BBlock { .. }
                | Template::HypHalves { .. }
                | Template::HypPairInv { .. }
                | Template::ImagHypHalves { .. }
                | Template::ImagHypBlock { .. }
                | Template::TwoHyp { .. }
                | Template::DoubledHyp { .. }
        )
    }

    /// Lengths of the independently ordered angle segments.
    pub fn segments(&self) -> Vec<usize> {
        match *self {
            Template::SigmaSplit { p, q } => vec![p, q],
            Template::TwoHyp { p1, q1, p2, q2 } => vec![p1.min(q2), p2.min(q1)],
            _ => vec![self.angle_count()],
        }
    }

    /// Canonical representative: absolute values for sign-invariant
    /// templates, then descending order within each segment.
    pub fn canonicalize(&self, theta: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = if self.sign_invariant() { theta.iter().map(|t| t.abs()).collect() } else { theta.to_vec() };
        let mut start = 0;
        for len in self.segments() {
            let end = (start + len).min(out.len());
            out[start..end].sort_by(|a, b| b.total_cmp(a));
            start = end;
        }
        out
    }

    /// Builds `a(theta)` over `field`.
    pub fn middle_factor(&self, theta: &[f64], field: Field) -> Result<DenseMatrix> {
        check_len(theta, self.angle_count(), "middle factor")?;
        let m = match *self {
            Template::UnitDiag { unit, .. } => aux_matrix(AuxKind::D(unit), theta)?,
            Template::RotPair { n } => {
                let r = aux_matrix(AuxKind::R { n }, theta)?;
                DenseMatrix::block_diag(&[r.clone(), r.t()])
            }
            Template::DiagPair { .. } => {
                let d = aux_matrix(AuxKind::D(Unit::I), theta)?;
                DenseMatrix::block_diag(&[d.clone(), d])
            }
            Template::CsBlock { p, q, s, .. } => {
                let n = p + q;
                let mut m = DenseMatrix::identity(Field::R, n);
                for (k, &t) in theta.iter().enumerate() {
                    let (a, b) = (k, n - s + k);
                    m.set(a, a, Quaternion::real(t.cos()));
                    m.set(b, b, Quaternion::real(t.cos()));
                    m.set(a, b, Quaternion::real(t.sin()));
                    m.set(b, a, Quaternion::real(-t.sin()));
                }
                m
            }
            Template::ImagCs { p, q, unit } => {
                let e = unit.quaternion();
                let mut m = DenseMatrix::identity(unit_field(unit), p + q);
                for (k, &t) in theta.iter().enumerate() {
                    let (a, b) = (k, p + k);
                    m.set(a, a, Quaternion::real(t.cos()));
                    m.set(b, b, Quaternion::real(t.cos()));
                    m.set(a, b, e * t.sin());
                    m.set(b, a, e * t.sin());
                }
                m
            }
            Template::KronCs { p, q } => {
                let n = p + q;
                let mut m = DenseMatrix::identity(Field::R, 2 * n);
                for (k, &t) in theta.iter().enumerate() {
                    let (c, s) = (t.cos(), t.sin());
                    for d in 0..2 {
                        let a = p - q + 2 * k + d;
                        let b = n + a;
                        m.set(a, a, Quaternion::real(c));
                        m.set(b, b, Quaternion::real(c));
                    }
                    let (a0, b0) = (p - q + 2 * k, n + p - q + 2 * k);
                    m.set(a0, b0 + 1, Quaternion::real(s));
                    m.set(a0 + 1, b0, Quaternion::real(-s));
                    m.set(b0, a0 + 1, Quaternion::real(s));
                    m.set(b0 + 1, a0, Quaternion::real(-s));
                }
                m
            }
            Template::Sigma { .. } | Template::SigmaSplit { .. } => aux_matrix(AuxKind::Sigma, theta)?,
            Template::HypBlock { p, q } => aux_matrix(AuxKind::H { m: p, n: q }, theta)?,
            Template::SigmaPair { .. } => {
                let s = aux_matrix(AuxKind::Sigma, theta)?;
                DenseMatrix::block_diag(&[s.clone(), s])
            }
            Template::SigmaInvPair { .. } => {
                let s = aux_matrix(AuxKind::Sigma, theta)?;
                let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
                DenseMatrix::block_diag(&[s, aux_matrix(AuxKind::Sigma, &neg)?])
            }
            Template::BBlock { n, unit } => aux_matrix(AuxKind::B { n, unit }, theta)?,
            Template::HypHalves { n } => hyperbolic_block(Field::R, n, n, theta, Quaternion::ONE),
            Template::HypPairInv { p, q } => {
                let h = aux_matrix(AuxKind::H { m: p, n: q }, theta)?;
                let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
                let hi = aux_matrix(AuxKind::H { m: p, n: q }, &neg)?;
                DenseMatrix::block_diag(&[h, hi])
            }
            Template::ImagHypHalves { n, unit } => hyperbolic_block(unit_field(unit), n, n, theta, unit.quaternion()),
            Template::ImagHypBlock { p, q, unit } => hyperbolic_block(unit_field(unit), p, q, theta, unit.quaternion()),
            Template::TwoHyp { p1, q1, p2, q2 } => {
                let m1 = p1.min(q2);
                let h1 = aux_matrix(AuxKind::H { m: p1.max(q2), n: m1 }, &theta[..m1])?;
                let h2 = aux_matrix(AuxKind::H { m: p2.max(q1), n: p2.min(q1) }, &theta[m1..])?;
                conjugate_by_perm(&DenseMatrix::block_diag(&[h1, h2]), PermKind::P2 { p1, q1, p2, q2 })
            }
            Template::DoubledHyp { p, q } => {
                // Layout (p, p, q, q): slot i of each p-block pairs with slot i of
                // the matching q-block, with angles theta and -theta.
                let mut m = DenseMatrix::identity(Field::R, 2 * (p + q));
                for (i, &t) in theta.iter().enumerate() {
                    for (a, b, sign) in [(i, 2 * p + i, 1.0), (p + i, 2 * p + q + i, -1.0)] {
                        m.set(a, a, Quaternion::real(t.cosh()));
                        m.set(b, b, Quaternion::real(t.cosh()));
                        m.set(a, b, Quaternion::real(sign * t.sinh()));
                        m.set(b, a, Quaternion::real(sign * t.sinh()));
                    }
                }
                m
            }
        };
        m.promote(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_example() {
        let r = aux_matrix(AuxKind::R { n: 3 }, &[FRAC_PI_2]).unwrap();
        let expected = DenseMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0]);
        assert!(r.distance(&expected) < 1e-15);
    }

    #[test]
    fn hyperbolic_block_example() {
        let h = aux_matrix(AuxKind::H { m: 2, n: 1 }, &[0.5]).unwrap();
        let (c, s) = (0.5f64.cosh(), 0.5f64.sinh());
        let expected = DenseMatrix::from_real(3, 3, &[c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c]);
        assert!(h.distance(&expected) < 1e-15);
    }

    #[test]
    fn wrong_angle_count_is_rejected() {
        assert!(matches!(aux_matrix(AuxKind::R { n: 4 }, &[0.1]), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn ppq_maps_symplectic_forms() {
        use crate::numeric::symplectic_j;
        let (p, q) = (2, 1);
        let big = symplectic_j(Field::R, p + q);
        let small = DenseMatrix::block_diag(&[symplectic_j(Field::R, p), symplectic_j(Field::R, q)]);
        let perm = block_permutation(PermKind::Ppq { p, q });
        assert!((&(&perm * &big) * &perm.t()).distance(&small) == 0.0);
        assert!(conjugate_by_perm(&small, PermKind::Ppq { p, q }).distance(&big) == 0.0);
    }

    #[test]
    fn shuffles_match_explicit_products() {
        let kind = PermKind::P2 { p1: 2, q1: 1, p2: 1, q2: 3 };
        let n = kind.size();
        let a = DenseMatrix::from_fn(Field::R, n, n, |i, j| Quaternion::real((i * n + j) as f64));
        let p = block_permutation(kind);
        assert_eq!(conjugate_by_perm(&a, kind), &(&p.t() * &a) * &p);
        assert_eq!(conjugate_by_perm_inv(&a, kind), &(&p * &a) * &p.t());
    }

    #[test]
    fn canonical_form_sorts_segments() {
        let t = Template::SigmaSplit { p: 2, q: 2 };
        assert_eq!(t.canonicalize(&[0.1, 0.5, -0.2, 0.3]), vec![0.5, 0.1, 0.3, -0.2]);
        let h = Template::HypBlock { p: 3, q: 2 };
        assert_eq!(h.canonicalize(&[-0.4, 0.2]), vec![0.4, 0.2]);
    }

    #[test]
    fn domains() {
        assert!(AngleDomain::ZeroPi.contains(3.0));
        assert!(!AngleDomain::ZeroHalfPi.contains(1.6));
        assert_eq!(AngleDomain::ZeroHalfPi.check(&[0.1, 2.0]), Err(Error::DomainViolation { index: 1, value: 2.0 }));
    }
}
