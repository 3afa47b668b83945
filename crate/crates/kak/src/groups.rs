//! Classical groups, their Lie algebras and the involutions that cut out
//! the `K` subgroups.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric::{
    exp, inverse, signature, symplectic_j, DenseMatrix, Field, Quaternion, TransposeKind, Unit,
};

/// Random source used throughout the crate.
pub type KakRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> KakRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Group families. `Sp { n }` acts on `2n`-dimensional space and
/// `Orth { unit }` only matters over the quaternions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GL { n: usize },
    U { n: usize },
    Upq { p: usize, q: usize },
    Sp { n: usize },
    Orth { n: usize, unit: Unit },
}

/// How group elements are stored. Realified and complexified groups take
/// matrices of twice the native size over the smaller field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Native,
    Realified,
    Complexified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupId {
    pub family: Family,
    pub field: Field,
    pub rep: Representation,
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fl = self.field.symbol();
        let base = match self.family {
            Family::GL { n } => format!("GL({n},{fl})"),
            Family::U { n } => format!("U({n},{fl})"),
            Family::Upq { p, q } => format!("U({p},{q},{fl})"),
            Family::Sp { n } => format!("Sp({},{fl})", 2 * n),
            Family::Orth { n, unit } => match self.field {
                Field::H => format!("O_{}({n},{fl})", if unit == Unit::I { "i" } else { "j" }),
                _ => format!("O({n},{fl})"),
            },
        };
        match self.rep {
            Representation::Native => write!(f, "{base}"),
            Representation::Realified => write!(f, "realify {base}"),
            Representation::Complexified => write!(f, "complexify {base}"),
        }
    }
}

impl GroupId {
    pub fn new(family: Family, field: Field) -> Result<Self> {
        let ok = match family {
            Family::Sp { .. } => field != Field::H,
            Family::Orth { .. } => field != Field::R,
            _ => true,
        };
        if !ok {
            return Err(Error::WrongField { expected: Field::C, found: field });
        }
        Ok(GroupId { family, field, rep: Representation::Native })
    }

    pub(crate) fn native(family: Family, field: Field) -> Self {
        GroupId::new(family, field).expect("valid group")
    }

    pub fn gl(n: usize, field: Field) -> Self {
        Self::native(Family::GL { n }, field)
    }

    pub fn unitary(n: usize, field: Field) -> Self {
        Self::native(Family::U { n }, field)
    }

    pub fn upq(p: usize, q: usize, field: Field) -> Self {
        Self::native(Family::Upq { p, q }, field)
    }

    pub fn sp(n: usize, field: Field) -> Self {
        Self::native(Family::Sp { n }, field)
    }

    pub fn orth(n: usize, field: Field, unit: Unit) -> Self {
        Self::native(Family::Orth { n, unit }, field)
    }

    pub fn realified(self) -> Self {
        assert_eq!(self.field, Field::C, "only complex groups are realified");
        GroupId { rep: Representation::Realified, ..self }
    }

    pub fn complexified(self) -> Self {
        assert_eq!(self.field, Field::H, "only quaternion groups are complexified");
        GroupId { rep: Representation::Complexified, ..self }
    }

    pub fn as_native(self) -> Self {
        GroupId { rep: Representation::Native, ..self }
    }

    /// Side length of native elements.
    pub fn native_dim(&self) -> usize {
        match self.family {
            Family::GL { n } | Family::U { n } | Family::Orth { n, .. } => n,
            Family::Upq { p, q } => p + q,
            Family::Sp { n } => 2 * n,
        }
    }

    /// Side length of stored elements.
    pub fn dim(&self) -> usize {
        match self.rep {
            Representation::Native => self.native_dim(),
            _ => 2 * self.native_dim(),
        }
    }

    /// Field of stored elements.
    pub fn storage_field(&self) -> Field {
        match self.rep {
            Representation::Native => self.field,
            Representation::Realified => Field::R,
            Representation::Complexified => Field::C,
        }
    }

    /// `(J, kind)` with the group being `{ M : M^kind J M = J }`, or `None` for GL.
    pub fn defining_pair(&self) -> Option<(DenseMatrix, TransposeKind)> {
        let f = self.field;
        match self.family {
            Family::GL { .. } => None,
            Family::U { n } => Some((DenseMatrix::identity(f, n), f.star())),
            Family::Upq { p, q } => Some((signature(f, p, q), f.star())),
            Family::Sp { n } => Some((symplectic_j(f, n), TransposeKind::T)),
            Family::Orth { n, unit } => {
                let kind = if f == Field::H { TransposeKind::DUnit(unit) } else { TransposeKind::T };
                Some((DenseMatrix::identity(f, n), kind))
            }
        }
    }

    /// `J^{-1}` for the defining form.
    fn form_inverse(&self) -> Option<DenseMatrix> {
        let (j, _) = self.defining_pair()?;
        Some(match self.family {
            Family::Sp { .. } => j.scale(-1.0),
            _ => j,
        })
    }

    fn check_shape(&self, m: &DenseMatrix) -> Result<()> {
        let d = self.dim();
        if m.rows() != d || m.cols() != d {
            return Err(Error::ShapeMismatch(format!("{self} expects {d}x{d}, got {}x{}", m.rows(), m.cols())));
        }
        if m.field() > self.storage_field() {
            return Err(Error::WrongField { expected: self.storage_field(), found: m.field() });
        }
        Ok(())
    }

    /// `||M^kind J M - J||_F`, zero or infinity for GL, with the
    /// representation structure added for realified/complexified groups.
    pub fn membership_residual(&self, m: &DenseMatrix) -> Result<f64> {
        self.check_shape(m)?;
        match self.rep {
            Representation::Native => Ok(self.native_residual(&m.promote(self.field)?)),
            Representation::Realified => {
                let c = m.derealify()?;
                Ok(m.real_structure_defect() + std::f64::consts::SQRT_2 * self.native_residual(&c))
            }
            Representation::Complexified => {
                let h = m.decomplexify()?;
                Ok(m.complex_structure_defect() + std::f64::consts::SQRT_2 * self.native_residual(&h))
            }
        }
    }

    fn native_residual(&self, m: &DenseMatrix) -> f64 {
        match self.defining_pair() {
            None => {
                if inverse(m).is_ok() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Some((j, kind)) => {
                let mt = m.transpose(kind).expect("kind matches field");
                (&(&mt * &j) * m).distance(&j)
            }
        }
    }

    /// Residual of `X` against the Lie algebra: `||X^kind J + J X||`.
    pub fn algebra_residual(&self, x: &DenseMatrix) -> Result<f64> {
        self.check_shape(x)?;
        let native = match self.rep {
            Representation::Native => x.promote(self.field)?,
            Representation::Realified => x.derealify()?,
            Representation::Complexified => x.decomplexify()?,
        };
        Ok(match self.defining_pair() {
            None => 0.0,
            Some((j, kind)) => {
                let xt = native.transpose(kind).expect("kind matches field");
                (&(&xt * &j) + &(&j * &native)).frobenius_norm()
            }
        })
    }

    fn represent(&self, m: DenseMatrix) -> DenseMatrix {
        match self.rep {
            Representation::Native => m,
            Representation::Realified => m.realify().expect("complex group"),
            Representation::Complexified => m.complexify(),
        }
    }

    /// A random Lie algebra element, scaled by `scale`.
    pub fn sample_algebra(&self, rng: &mut KakRng, scale: f64) -> DenseMatrix {
        let n = self.native_dim();
        let y = random_matrix(self.field, n, n, rng, scale);
        let x = match (self.defining_pair(), self.form_inverse()) {
            (Some((j, kind)), Some(j_inv)) => {
                let yt = y.transpose(kind).expect("kind matches field");
                (&y - &(&(&j_inv * &yt) * &j)).scale(0.5)
            }
            _ => y,
        };
        self.represent(x)
    }

    /// `exp` of a random algebra element, in the identity component.
    pub fn sample_group(&self, rng: &mut KakRng, scale: f64) -> DenseMatrix {
        let n = self.native_dim();
        let y = random_matrix(self.field, n, n, rng, scale);
        let x = match (self.defining_pair(), self.form_inverse()) {
            (Some((j, kind)), Some(j_inv)) => {
                let yt = y.transpose(kind).expect("kind matches field");
                (&y - &(&(&j_inv * &yt) * &j)).scale(0.5)
            }
            _ => y,
        };
        self.represent(exp(&x).expect("square"))
    }
}

/// Matrix with independent `N(0, scale^2)` components in every real slot.
pub fn random_matrix(field: Field, rows: usize, cols: usize, rng: &mut KakRng, scale: f64) -> DenseMatrix {
    let mut draw = || -> f64 { rng.sample::<f64, _>(StandardNormal) * scale };
    DenseMatrix::from_fn(field, rows, cols, |_, _| match field {
        Field::R => Quaternion::real(draw()),
        Field::C => {
            let w = draw();
            Quaternion::new(w, draw(), 0.0, 0.0)
        }
        Field::H => {
            let w = draw();
            let x = draw();
            let y = draw();
            Quaternion::new(w, x, y, draw())
        }
    })
}

/// Identifying shape of an involution. Sizes are the native side length
/// of the matrices it acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvolutionTag {
    /// `-X^kind`
    NegStar(TransposeKind),
    /// `I_{p,q} X I_{p,q}`
    ConjSignature { p: usize, q: usize },
    /// `-I_{p,q} X^kind I_{p,q}`
    NegSignatureStar { p: usize, q: usize, kind: TransposeKind },
    /// `-J X J` or `-J conj(X) J`
    NegJConj { n: usize, bar: bool },
    /// `J X^T J`
    JTransposeJ { n: usize },
    /// `conj(X)`
    EntryConj,
    /// `-eta X eta`
    UnitConj(Unit),
    /// `diag(I_{p,q}, I_{p,q}) X diag(I_{p,q}, I_{p,q})`
    ConjDoubleSignature { p: usize, q: usize },
    /// `diag(I_{p1,p2}, I_{q1,q2}) X diag(I_{p1,p2}, I_{q1,q2})`
    ConjSplitSignature { p1: usize, p2: usize, q1: usize, q2: usize },
    /// `-diag(J_p, J_q) X diag(J_p, J_q)`, conjugating entries when `bar`
    NegSplitJ { p: usize, q: usize, bar: bool },
}

impl fmt::Display for InvolutionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = |k: &TransposeKind| match k {
            TransposeKind::T => "T".to_string(),
            TransposeKind::H => "H".to_string(),
            TransposeKind::D => "D".to_string(),
            TransposeKind::DUnit(Unit::I) => "D_i".to_string(),
            TransposeKind::DUnit(Unit::J) => "D_j".to_string(),
        };
        match self {
            InvolutionTag::NegStar(k) => write!(f, "-X^{}", star(k)),
            InvolutionTag::ConjSignature { p, q } => write!(f, "I_{{{p},{q}}} X I_{{{p},{q}}}"),
            InvolutionTag::NegSignatureStar { p, q, kind } => {
                write!(f, "-I_{{{p},{q}}} X^{} I_{{{p},{q}}}", star(kind))
            }
            InvolutionTag::NegJConj { bar: false, .. } => write!(f, "-J X J"),
            InvolutionTag::NegJConj { bar: true, .. } => write!(f, "-J conj(X) J"),
            InvolutionTag::JTransposeJ { .. } => write!(f, "J X^T J"),
            InvolutionTag::EntryConj => write!(f, "conj(X)"),
            InvolutionTag::UnitConj(Unit::I) => write!(f, "-i X i"),
            InvolutionTag::UnitConj(Unit::J) => write!(f, "-j X j"),
            InvolutionTag::ConjDoubleSignature { p, q } => {
                write!(f, "diag(I_{{{p},{q}}}, I_{{{p},{q}}}) X diag(I_{{{p},{q}}}, I_{{{p},{q}}})")
            }
            InvolutionTag::ConjSplitSignature { p1, p2, q1, q2 } => write!(
                f,
                "diag(I_{{{p1},{p2}}}, I_{{{q1},{q2}}}) X diag(I_{{{p1},{p2}}}, I_{{{q1},{q2}}})"
            ),
            InvolutionTag::NegSplitJ { bar: false, .. } => write!(f, "-diag(J_p, J_q) X diag(J_p, J_q)"),
            InvolutionTag::NegSplitJ { bar: true, .. } => write!(f, "-diag(J_p, J_q) conj(X) diag(J_p, J_q)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Form {
    /// `X -> M f(X) M^{-1}`, `f` the identity or entrywise conjugation.
    Similarity { m: Option<(DenseMatrix, DenseMatrix)>, bar: bool },
    /// `X -> -M X^kind M^{-1}`.
    NegTranspose { m: Option<(DenseMatrix, DenseMatrix)>, kind: TransposeKind },
    /// `X -> eta X eta^{-1}`.
    Unit(Unit),
}

/// An involutive automorphism of a matrix Lie algebra, together with
/// its lift to the group.
#[derive(Clone, Debug, PartialEq)]
pub struct Involution {
    pub tag: InvolutionTag,
    pub field: Field,
    form: Form,
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)
    }
}

impl Involution {
    pub fn new(tag: InvolutionTag, field: Field) -> Result<Self> {
        let unknown = || Error::UnknownInvolution(format!("{tag} over {field:?}"));
        let with_inv = |m: DenseMatrix, m_inv: DenseMatrix| Some((m, m_inv));
        let form = match tag {
            InvolutionTag::NegStar(kind) => {
                DenseMatrix::identity(field, 1).transpose(kind).map_err(|_| unknown())?;
                Form::NegTranspose { m: None, kind }
            }
            InvolutionTag::ConjSignature { p, q } => {
                let s = signature(field, p, q);
                Form::Similarity { m: with_inv(s.clone(), s), bar: false }
            }
            InvolutionTag::NegSignatureStar { p, q, kind } => {
                DenseMatrix::identity(field, 1).transpose(kind).map_err(|_| unknown())?;
                let s = signature(field, p, q);
                Form::NegTranspose { m: with_inv(s.clone(), s), kind }
            }
            InvolutionTag::NegJConj { n, bar } => {
                if bar && field != Field::C {
                    return Err(unknown());
                }
                let j = symplectic_j(field, n);
                Form::Similarity { m: with_inv(j.clone(), j.scale(-1.0)), bar }
            }
            InvolutionTag::JTransposeJ { n } => {
                if field == Field::H {
                    return Err(unknown());
                }
                let j = symplectic_j(field, n);
                Form::NegTranspose { m: with_inv(j.clone(), j.scale(-1.0)), kind: TransposeKind::T }
            }
            InvolutionTag::EntryConj => {
                if field != Field::C {
                    return Err(unknown());
                }
                Form::Similarity { m: None, bar: true }
            }
            InvolutionTag::UnitConj(u) => {
                if field != Field::H {
                    return Err(unknown());
                }
                Form::Unit(u)
            }
            InvolutionTag::ConjDoubleSignature { p, q } => {
                let s = signature(field, p, q);
                let d = DenseMatrix::block_diag(&[s.clone(), s]);
                Form::Similarity { m: with_inv(d.clone(), d), bar: false }
            }
            InvolutionTag::ConjSplitSignature { p1, p2, q1, q2 } => {
                let d = DenseMatrix::block_diag(&[signature(field, p1, p2), signature(field, q1, q2)]);
                Form::Similarity { m: with_inv(d.clone(), d), bar: false }
            }
            InvolutionTag::NegSplitJ { p, q, bar } => {
                if bar && field != Field::C {
                    return Err(unknown());
                }
                let d = DenseMatrix::block_diag(&[symplectic_j(field, p), symplectic_j(field, q)]);
                Form::Similarity { m: with_inv(d.clone(), d.scale(-1.0)), bar }
            }
        };
        Ok(Involution { tag, field, form })
    }

    fn sandwich(m: &Option<(DenseMatrix, DenseMatrix)>, x: &DenseMatrix) -> DenseMatrix {
        match m {
            None => x.clone(),
            Some((m, m_inv)) => &(m * x) * m_inv,
        }
    }

    /// Action on the Lie algebra.
    pub fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        match &self.form {
            Form::Similarity { m, bar } => Self::sandwich(m, &if *bar { x.conj() } else { x.clone() }),
            Form::NegTranspose { m, kind } => -&Self::sandwich(m, &x.transpose(*kind).expect("checked kind")),
            Form::Unit(u) => {
                let e = u.quaternion();
                x.left_scalar(e).right_scalar(e.inv())
            }
        }
    }

    /// Action on the group.
    pub fn apply_group(&self, g: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(match &self.form {
            Form::NegTranspose { m, kind } => Self::sandwich(m, &inverse(&g.transpose(*kind)?)?),
            _ => self.apply_linear(g),
        })
    }

    /// `theta(g)^{-1}`, computed without inverting where possible.
    pub fn apply_group_inverse(&self, g: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(match &self.form {
            Form::NegTranspose { m, kind } => Self::sandwich(m, &g.transpose(*kind)?),
            _ => self.apply_linear(&inverse(g)?),
        })
    }

    fn apply_linear(&self, g: &DenseMatrix) -> DenseMatrix {
        match &self.form {
            Form::Similarity { m, bar } => Self::sandwich(m, &if *bar { g.conj() } else { g.clone() }),
            Form::Unit(u) => {
                let e = u.quaternion();
                g.left_scalar(e).right_scalar(e.inv())
            }
            Form::NegTranspose { .. } => unreachable!("handled by callers"),
        }
    }

    /// `(k, p)` with `X = k + p`, `theta(k) = k` and `theta(p) = -p`.
    pub fn split(&self, x: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
        let tx = self.apply(x);
        ((x + &tx).scale(0.5), (x - &tx).scale(0.5))
    }
}

/// Applies an involution on the Lie algebra.
pub fn involution(inv: &Involution, x: &DenseMatrix) -> DenseMatrix {
    inv.apply(x)
}

/// Splits `X` into the `+1` and `-1` eigenspaces of `inv`.
pub fn split_eigenspaces(inv: &Involution, x: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    inv.split(x)
}

pub fn membership_residual(g: &GroupId, m: &DenseMatrix) -> Result<f64> {
    g.membership_residual(m)
}

pub fn sample_algebra(g: &GroupId, rng: &mut KakRng, scale: f64) -> DenseMatrix {
    g.sample_algebra(rng, scale)
}

pub fn sample_group(g: &GroupId, rng: &mut KakRng, scale: f64) -> DenseMatrix {
    g.sample_group(rng, scale)
}
