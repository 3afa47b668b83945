//! Catalogue of the 53 factorization cells and the generic machinery to
//! embed factors, compose elements and check each cell's structure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::{GroupId, Involution, InvolutionTag, KakRng};
use crate::numeric::{inverse, log_near_identity, DenseMatrix, Field, TransposeKind, Unit};
use crate::templates::{conjugate_by_perm, conjugate_by_perm_inv, AngleDomain, PermKind, Template};

/// Every `(fid, beta)` pair that has a factorization.
pub const CELLS: [(u8, &[u8]); 25] = [
    (1, &[2, 4]),
    (2, &[1, 2]),
    (3, &[2]),
    (4, &[1, 2, 4]),
    (5, &[2, 4]),
    (6, &[1, 2]),
    (7, &[1, 2, 4]),
    (8, &[1, 2, 4]),
    (9, &[1, 2, 4]),
    (10, &[1, 2]),
    (11, &[1, 2]),
    (12, &[2, 4]),
    (13, &[2, 4]),
    (14, &[1, 2]),
    (15, &[1, 2]),
    (16, &[1, 2]),
    (17, &[2]),
    (18, &[1, 2, 4]),
    (19, &[1, 2, 4]),
    (20, &[1, 2]),
    (21, &[1, 2]),
    (22, &[2, 4]),
    (23, &[2, 4]),
    (24, &[2, 4]),
    (25, &[2]),
];

/// All cells as `(fid, beta)` in catalogue order.
pub fn cells() -> Vec<(u8, u8)> {
    CELLS.iter().flat_map(|(f, bs)| bs.iter().map(move |b| (*f, *b))).collect()
}

pub fn has_cell(fid: u8, beta: u8) -> bool {
    CELLS.iter().any(|(f, bs)| *f == fid && bs.contains(&beta))
}

/// Size parameters of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Params {
    N { n: usize },
    Pq { p: usize, q: usize },
    Pqrs { p: usize, q: usize, r: usize, s: usize },
    Four { p1: usize, q1: usize, p2: usize, q2: usize },
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::N { n } => write!(f, "n={n}"),
            Params::Pq { p, q } => write!(f, "p={p} q={q}"),
            Params::Pqrs { p, q, r, s } => write!(f, "p={p} q={q} r={r} s={s}"),
            Params::Four { p1, q1, p2, q2 } => write!(f, "p1={p1} q1={q1} p2={p2} q2={q2}"),
        }
    }
}

/// Which parameter shape a factorization takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    N,
    /// `(p, q)`; `ordered` requires `p >= q`.
    Pq { ordered: bool },
    Pqrs,
    Four,
}

pub fn param_kind(fid: u8) -> ParamKind {
    match fid {
        4 => ParamKind::Pqrs,
        19 => ParamKind::Four,
        9 => ParamKind::Pq { ordered: false },
        5 | 6 | 8 | 16 | 18 | 20 | 22 | 24 => ParamKind::Pq { ordered: true },
        _ => ParamKind::N,
    }
}

impl Params {
    /// The size parameter `n` the cell is indexed by.
    pub fn n(&self) -> usize {
        match *self {
            Params::N { n } => n,
            Params::Pq { p, q } => p + q,
            Params::Pqrs { p, q, .. } => p + q,
            Params::Four { p1, q1, p2, q2 } => p1 + q1 + p2 + q2,
        }
    }

    fn validate(&self, fid: u8) -> Result<()> {
        let bad = |msg: String| Err(Error::BadPartition(msg));
        match (param_kind(fid), *self) {
            (ParamKind::N, Params::N { n }) if n >= 1 => Ok(()),
            (ParamKind::Pq { ordered }, Params::Pq { p, q }) => {
                if p + q == 0 {
                    bad("p + q must be positive".into())
                } else if ordered && p < q {
                    bad(format!("F{fid} needs p >= q, got p = {p}, q = {q}"))
                } else {
                    Ok(())
                }
            }
            (ParamKind::Pqrs, Params::Pqrs { p, q, r, s }) => {
                if p + q != r + s || p + q == 0 {
                    bad(format!("p + q must equal r + s > 0, got {p}+{q} vs {r}+{s}"))
                } else if s > p.min(q) {
                    bad(format!("s = {s} exceeds min(p, q) = {}", p.min(q)))
                } else {
                    Ok(())
                }
            }
            (ParamKind::Four, Params::Four { p1, q1, p2, q2 }) if p1 + q1 + p2 + q2 > 0 => Ok(()),
            (kind, p) => bad(format!("F{fid} takes {kind:?} parameters, got {p}")),
        }
    }

    /// A small family of parameter choices of size `n` covering the
    /// interesting partition shapes.
    pub fn variants(fid: u8, n: usize) -> Vec<Params> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let (hp, hq) = (n.div_ceil(2), n / 2);
        match param_kind(fid) {
            ParamKind::N => out.push(Params::N { n }),
            ParamKind::Pq { ordered } => {
                out.push(Params::Pq { p: hp, q: hq });
                if n >= 3 {
                    out.push(Params::Pq { p: n - 1, q: 1 });
                }
                if !ordered && n >= 2 {
                    out.push(Params::Pq { p: 1, q: n - 1 });
                }
            }
            ParamKind::Pqrs => {
                out.push(Params::Pqrs { p: hp, q: hq, r: hp, s: hq });
                out.push(Params::Pqrs { p: hp, q: hq, r: n, s: 0 });
                if hq >= 2 {
                    out.push(Params::Pqrs { p: hp, q: hq, r: n - hq + 1, s: hq - 1 });
                }
                if n >= 3 {
                    out.push(Params::Pqrs { p: n - 1, q: 1, r: n - 1, s: 1 });
                }
            }
            ParamKind::Four => {
                let p1 = hp.div_ceil(2);
                let q1 = hq.div_ceil(2);
                out.push(Params::Four { p1, q1, p2: hp - p1, q2: hq - q1 });
                if n >= 2 {
                    out.push(Params::Four { p1: hp, q1: 0, p2: 0, q2: hq });
                }
            }
        }
        out.dedup();
        out
    }
}

/// How raw factors become ambient matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedBase {
    Direct,
    BlockDiagonal,
    Realified,
    Complexified,
    /// `G -> diag(G, G^{-T})`
    InverseTransposePaired,
}

/// Which side the permutation sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermSide {
    /// `P^T A P`
    TransposeFirst,
    /// `P A P^T`
    TransposeLast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub base: EmbedBase,
    pub perm: Option<(PermKind, PermSide)>,
}

impl Embedding {
    const fn plain(base: EmbedBase) -> Self {
        Embedding { base, perm: None }
    }
}

/// A `K` factor: the raw groups and how they are embedded.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSpec {
    pub groups: Vec<GroupId>,
    pub embed: Embedding,
}

impl FactorSpec {
    fn new(groups: Vec<GroupId>, base: EmbedBase) -> Self {
        FactorSpec { groups, embed: Embedding::plain(base) }
    }

    fn permuted(mut self, perm: PermKind, side: PermSide) -> Self {
        self.embed.perm = Some((perm, side));
        self
    }

    /// Embeds raw factors into the ambient group over `field`.
    pub fn embed(&self, raw: &[DenseMatrix], field: Field) -> Result<DenseMatrix> {
        if raw.len() != self.groups.len() {
            return Err(Error::ShapeMismatch(format!("expected {} factors, got {}", self.groups.len(), raw.len())));
        }
        for (g, m) in self.groups.iter().zip(raw) {
            let d = g.native_dim();
            if m.rows() != d || m.cols() != d {
                return Err(Error::ShapeMismatch(format!("{g} expects {d}x{d}, got {}x{}", m.rows(), m.cols())));
            }
            if m.field() > g.field {
                return Err(Error::WrongField { expected: g.field, found: m.field() });
            }
        }
        let base = match self.embed.base {
            EmbedBase::Direct => raw[0].clone(),
            EmbedBase::BlockDiagonal => DenseMatrix::block_diag(raw),
            EmbedBase::Realified => raw[0].promote(Field::C)?.realify()?,
            EmbedBase::Complexified => raw[0].complexify(),
            EmbedBase::InverseTransposePaired => {
                let inv_t = inverse(&raw[0])?.t();
                DenseMatrix::block_diag(&[raw[0].clone(), inv_t])
            }
        };
        let out = match self.embed.perm {
            None => base,
            Some((kind, PermSide::TransposeFirst)) => conjugate_by_perm(&base, kind),
            Some((kind, PermSide::TransposeLast)) => conjugate_by_perm_inv(&base, kind),
        };
        out.promote(field)
    }

    /// The group the embedded factor lives in, as seen from inside the
    /// ambient group (used to report membership of embedded factors).
    pub fn describe(&self) -> String {
        let names: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        let inner = names.join(" x ");
        let wrapped = match self.embed.base {
            EmbedBase::Direct | EmbedBase::BlockDiagonal => inner,
            EmbedBase::Realified => format!("realify {inner}"),
            EmbedBase::Complexified => format!("complexify {inner}"),
            EmbedBase::InverseTransposePaired => format!("diag(G, G^-T), G in {inner}"),
        };
        match self.embed.perm {
            None => wrapped,
            Some((kind, _)) => format!("{wrapped} (permuted {kind:?})"),
        }
    }
}

/// Everything that defines one cell at fixed sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationSpec {
    pub fid: u8,
    pub beta: u8,
    pub params: Params,
    pub ambient: GroupId,
    pub k1: FactorSpec,
    pub k2: FactorSpec,
    pub template: Template,
    pub domain: AngleDomain,
    pub sigma: InvolutionTag,
    pub tau: InvolutionTag,
}

impl FactorizationSpec {
    pub fn field(&self) -> Field {
        self.ambient.field
    }

    pub fn dim(&self) -> usize {
        self.ambient.native_dim()
    }

    pub fn angle_count(&self) -> usize {
        self.template.angle_count()
    }

    pub fn label(&self) -> String {
        format!("F{:02}.{} {}", self.fid, self.field().symbol(), self.params)
    }

    pub fn cell_label(&self) -> String {
        format!("F{:02}.{}", self.fid, self.field().symbol())
    }

    pub fn sigma(&self) -> Involution {
        Involution::new(self.sigma, self.field()).expect("catalogue involutions are valid")
    }

    pub fn tau(&self) -> Involution {
        Involution::new(self.tau, self.field()).expect("catalogue involutions are valid")
    }

    pub fn middle(&self, theta: &[f64]) -> Result<DenseMatrix> {
        if self.domain != AngleDomain::RealCanonical {
            self.domain.check(theta)?;
        }
        self.template.middle_factor(theta, self.field())
    }

    pub fn embed_k1(&self, raw: &[DenseMatrix]) -> Result<DenseMatrix> {
        self.k1.embed(raw, self.field())
    }

    pub fn embed_k2(&self, raw: &[DenseMatrix]) -> Result<DenseMatrix> {
        self.k2.embed(raw, self.field())
    }

    /// `k1 * a(theta) * k2` from raw factors.
    pub fn compose(&self, k1: &[DenseMatrix], theta: &[f64], k2: &[DenseMatrix]) -> Result<DenseMatrix> {
        let a = self.middle(theta)?;
        let k1 = self.embed_k1(k1)?;
        let k2 = self.embed_k2(k2)?;
        Ok(&(&k1 * &a) * &k2)
    }

    /// Draws random factors and angles and composes them.
    pub fn sample_factored(&self, rng: &mut KakRng, scale: f64) -> Result<FactoredElement> {
        let k1: Vec<DenseMatrix> = self.k1.groups.iter().map(|g| g.sample_group(rng, scale)).collect();
        let k2: Vec<DenseMatrix> = self.k2.groups.iter().map(|g| g.sample_group(rng, scale)).collect();
        let theta = self.sample_angles(rng);
        let g = self.compose(&k1, &theta, &k2)?;
        Ok(FactoredElement { spec: self.clone(), k1, theta, k2, g })
    }

    pub fn sample_angles(&self, rng: &mut KakRng) -> Vec<f64> {
        let (lo, hi) = match self.domain {
            AngleDomain::ZeroPi => (0.0, PI),
            AngleDomain::ZeroHalfPi => (0.0, FRAC_PI_2),
            AngleDomain::RealCanonical if self.template.sign_invariant() => (0.0, 1.5),
            AngleDomain::RealCanonical => (-1.5, 1.5),
        };
        (0..self.angle_count()).map(|_| rng.random_range(lo..hi)).collect()
    }

    /// Structural self-check of the cell; see [`ConsistencyReport`].
    pub fn consistency_check(&self, rng: &mut KakRng, trials: usize) -> Result<ConsistencyReport> {
        consistency_check(self, rng, trials)
    }
}

/// A group element together with the factors it was composed from.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredElement {
    pub spec: FactorizationSpec,
    pub k1: Vec<DenseMatrix>,
    pub theta: Vec<f64>,
    pub k2: Vec<DenseMatrix>,
    pub g: DenseMatrix,
}

impl FactoredElement {
    pub fn k1_embedded(&self) -> DenseMatrix {
        self.spec.embed_k1(&self.k1).expect("validated at construction")
    }

    pub fn k2_embedded(&self) -> DenseMatrix {
        self.spec.embed_k2(&self.k2).expect("validated at construction")
    }

    pub fn middle(&self) -> DenseMatrix {
        self.spec.template.middle_factor(&self.theta, self.spec.field()).expect("validated at construction")
    }

    /// `||k1 a k2 - g||_F`.
    pub fn reconstruction_residual(&self) -> f64 {
        let r = &(&self.k1_embedded() * &self.middle()) * &self.k2_embedded();
        r.distance(&self.g)
    }
}

pub fn compose(spec: &FactorizationSpec, k1: &[DenseMatrix], theta: &[f64], k2: &[DenseMatrix]) -> Result<DenseMatrix> {
    spec.compose(k1, theta, k2)
}

pub fn sample_factored(spec: &FactorizationSpec, rng: &mut KakRng, scale: f64) -> Result<FactoredElement> {
    spec.sample_factored(rng, scale)
}

fn lifted(n: usize, field: Field) -> (GroupId, EmbedBase) {
    lifted_group(GroupId::unitary(n, field.double().expect("beta 1 or 2")))
}

/// Native group plus the embedding that doubles it into the smaller field.
fn lifted_group(g: GroupId) -> (GroupId, EmbedBase) {
    match g.field {
        Field::C => (g, EmbedBase::Realified),
        Field::H => (g, EmbedBase::Complexified),
        Field::R => unreachable!("lifts start from C or H"),
    }
}

/// Builds the spec for `(fid, beta)` at the given sizes.
pub fn spec(fid: u8, beta: u8, params: Params) -> Result<FactorizationSpec> {
    if !has_cell(fid, beta) {
        return Err(Error::EmptyCell { fid, beta });
    }
    params.validate(fid)?;
    let f = Field::from_beta(beta).expect("catalogue betas are 1, 2 or 4");
    let half = f.half();
    let unit = if beta == 4 { Unit::J } else { Unit::I };
    let neg_star = InvolutionTag::NegStar(f.star());
    let bar = f == Field::C;
    use EmbedBase::*;
    use InvolutionTag as T;

    let u = |n: usize, fl: Field| GroupId::unitary(n, fl);
    let direct = |g: GroupId| FactorSpec::new(vec![g], Direct);
    let blocks = |gs: Vec<GroupId>| FactorSpec::new(gs, BlockDiagonal);
    let lift = |g: GroupId| {
        let (g, base) = lifted_group(g);
        FactorSpec::new(vec![g], base)
    };
    let (n, p, q) = match params {
        Params::N { n } => (n, 0, 0),
        Params::Pq { p, q } => (p + q, p, q),
        Params::Pqrs { p, q, .. } => (p + q, p, q),
        Params::Four { .. } => (params.n(), 0, 0),
    };

    #[allow(clippy::type_complexity)]
    let (ambient, k1, k2, template, domain, sigma, tau): (
        GroupId,
        FactorSpec,
        FactorSpec,
        Template,
        AngleDomain,
        InvolutionTag,
        InvolutionTag,
    ) = match fid {
        1 => {
            let s = if beta == 2 { T::NegStar(TransposeKind::T) } else { T::NegStar(TransposeKind::DUnit(Unit::I)) };
            let k = u(n, half.unwrap());
            (u(n, f), direct(k), direct(k), Template::UnitDiag { n, unit }, AngleDomain::ZeroPi, s, s)
        }
        2 => {
            let (g, base) = lifted(n, f);
            let s = T::NegJConj { n, bar };
            let tpl = if beta == 1 { Template::RotPair { n } } else { Template::DiagPair { n } };
            let k = FactorSpec::new(vec![g], base);
            (u(2 * n, f), k.clone(), k, tpl, AngleDomain::ZeroHalfPi, s, s)
        }
        3 => (
            u(2 * n, f),
            direct(u(2 * n, Field::R)),
            lift(u(n, Field::H)),
            Template::DiagPair { n },
            AngleDomain::ZeroHalfPi,
            T::NegStar(TransposeKind::T),
            T::NegJConj { n, bar: true },
        ),
        4 => {
            let Params::Pqrs { r, s, .. } = params else { unreachable!() };
            (
                u(n, f),
                blocks(vec![u(p, f), u(q, f)]),
                blocks(vec![u(r, f), u(s, f)]),
                Template::CsBlock { p, q, r, s },
                AngleDomain::ZeroHalfPi,
                T::ConjSignature { p, q },
                T::ConjSignature { p: r, q: s },
            )
        }
        5 => {
            let s = if beta == 2 { T::NegStar(TransposeKind::T) } else { T::NegStar(TransposeKind::DUnit(Unit::I)) };
            (
                u(n, f),
                direct(u(n, half.unwrap())),
                blocks(vec![u(p, f), u(q, f)]),
                Template::ImagCs { p, q, unit },
                AngleDomain::ZeroHalfPi,
                s,
                T::ConjSignature { p, q },
            )
        }
        6 => {
            let (g, base) = lifted(n, f);
            (
                u(2 * n, f),
                FactorSpec::new(vec![g], base),
                blocks(vec![u(2 * p, f), u(2 * q, f)]),
                Template::KronCs { p, q },
                AngleDomain::ZeroHalfPi,
                T::NegJConj { n, bar },
                T::ConjSignature { p: 2 * p, q: 2 * q },
            )
        }
        7 => (
            GroupId::gl(n, f),
            direct(u(n, f)),
            direct(u(n, f)),
            Template::Sigma { n },
            AngleDomain::RealCanonical,
            neg_star,
            neg_star,
        ),
        8 => (
            GroupId::gl(n, f),
            direct(u(n, f)),
            blocks(vec![GroupId::gl(p, f), GroupId::gl(q, f)]),
            Template::HypBlock { p, q },
            AngleDomain::RealCanonical,
            neg_star,
            T::ConjSignature { p, q },
        ),
        9 => (
            GroupId::gl(n, f),
            direct(u(n, f)),
            direct(GroupId::upq(p, q, f)),
            Template::SigmaSplit { p, q },
            AngleDomain::RealCanonical,
            neg_star,
            T::NegSignatureStar { p, q, kind: f.star() },
        ),
        10 => (
            GroupId::gl(2 * n, f),
            direct(u(2 * n, f)),
            direct(GroupId::sp(n, f)),
            Template::SigmaPair { n },
            AngleDomain::RealCanonical,
            neg_star,
            T::JTransposeJ { n },
        ),
        11 => (
            GroupId::gl(2 * n, f),
            direct(u(2 * n, f)),
            lift(GroupId::gl(n, f.double().unwrap())),
            Template::SigmaInvPair { n },
            AngleDomain::RealCanonical,
            neg_star,
            T::NegJConj { n, bar },
        ),
        12 => (
            GroupId::gl(n, f),
            direct(u(n, f)),
            direct(GroupId::gl(n, half.unwrap())),
            Template::BBlock { n, unit },
            AngleDomain::RealCanonical,
            neg_star,
            if beta == 2 { T::EntryConj } else { T::UnitConj(Unit::I) },
        ),
        13 => (
            GroupId::gl(n, f),
            direct(u(n, f)),
            direct(GroupId::orth(n, f, Unit::J)),
            Template::Sigma { n },
            AngleDomain::RealCanonical,
            neg_star,
            if beta == 2 { T::NegStar(TransposeKind::T) } else { T::NegStar(TransposeKind::DUnit(Unit::J)) },
        ),
        14 => {
            let (g, base) = lifted(n, f);
            let k = FactorSpec::new(vec![g], base);
            (GroupId::sp(n, f), k.clone(), k, Template::SigmaInvPair { n }, AngleDomain::RealCanonical, neg_star, neg_star)
        }
        15 => {
            let (g, base) = lifted(n, f);
            (
                GroupId::sp(n, f),
                FactorSpec::new(vec![g], base),
                FactorSpec::new(vec![GroupId::gl(n, f)], InverseTransposePaired),
                Template::HypHalves { n },
                AngleDomain::RealCanonical,
                neg_star,
                T::ConjSignature { p: n, q: n },
            )
        }
        16 => {
            let (g, base) = lifted(n, f);
            (
                GroupId::sp(n, f),
                FactorSpec::new(vec![g], base),
                blocks(vec![GroupId::sp(p, f), GroupId::sp(q, f)])
                    .permuted(PermKind::Ppq { p, q }, PermSide::TransposeFirst),
                Template::HypPairInv { p, q },
                AngleDomain::RealCanonical,
                neg_star,
                T::ConjDoubleSignature { p, q },
            )
        }
        17 => (
            GroupId::sp(n, f),
            lift(u(n, Field::H)),
            direct(GroupId::sp(n, Field::R)),
            Template::ImagHypHalves { n, unit: Unit::I },
            AngleDomain::RealCanonical,
            neg_star,
            T::EntryConj,
        ),
        18 => (
            GroupId::upq(p, q, f),
            blocks(vec![u(p, f), u(q, f)]),
            blocks(vec![u(p, f), u(q, f)]),
            Template::HypBlock { p, q },
            AngleDomain::RealCanonical,
            T::ConjSignature { p, q },
            T::ConjSignature { p, q },
        ),
        19 => {
            let Params::Four { p1, q1, p2, q2 } = params else { unreachable!() };
            let (pp, qq) = (p1 + p2, q1 + q2);
            (
                GroupId::upq(pp, qq, f),
                blocks(vec![u(pp, f), u(qq, f)]),
                blocks(vec![GroupId::upq(p1, q1, f), GroupId::upq(p2, q2, f)])
                    .permuted(PermKind::P1 { p1, q1, p2, q2 }, PermSide::TransposeFirst),
                Template::TwoHyp { p1, q1, p2, q2 },
                AngleDomain::RealCanonical,
                T::ConjSignature { p: pp, q: qq },
                T::ConjSplitSignature { p1, p2, q1, q2 },
            )
        }
        20 => {
            let (g, base) = lifted_group(GroupId::upq(p, q, f.double().unwrap()));
            (
                GroupId::upq(2 * p, 2 * q, f),
                blocks(vec![u(2 * p, f), u(2 * q, f)]),
                FactorSpec::new(vec![g], base).permuted(PermKind::Ppq { p, q }, PermSide::TransposeLast),
                Template::DoubledHyp { p, q },
                AngleDomain::RealCanonical,
                T::ConjSignature { p: 2 * p, q: 2 * q },
                T::NegSplitJ { p, q, bar },
            )
        }
        21 => {
            let (g, base) = lifted_group(GroupId::orth(n, f.double().unwrap(), Unit::I));
            (
                GroupId::upq(n, n, f),
                blocks(vec![u(n, f), u(n, f)]),
                FactorSpec::new(vec![g], base),
                Template::HypHalves { n },
                AngleDomain::RealCanonical,
                T::ConjSignature { p: n, q: n },
                T::NegJConj { n, bar },
            )
        }
        22 => (
            GroupId::upq(p, q, f),
            blocks(vec![u(p, f), u(q, f)]),
            direct(GroupId::upq(p, q, half.unwrap())),
            Template::ImagHypBlock { p, q, unit },
            AngleDomain::RealCanonical,
            T::ConjSignature { p, q },
            if beta == 2 { T::EntryConj } else { T::UnitConj(Unit::I) },
        ),
        23 => {
            let k = u(n, half.unwrap());
            (
                GroupId::orth(n, f, Unit::I),
                direct(k),
                direct(k),
                Template::BBlock { n, unit },
                AngleDomain::RealCanonical,
                neg_star,
                if beta == 2 { T::EntryConj } else { T::UnitConj(Unit::I) },
            )
        }
        24 => (
            GroupId::orth(n, f, Unit::I),
            direct(u(n, half.unwrap())),
            blocks(vec![GroupId::orth(p, f, Unit::I), GroupId::orth(q, f, Unit::I)]),
            Template::ImagHypBlock { p, q, unit },
            AngleDomain::RealCanonical,
            neg_star,
            T::ConjSignature { p, q },
        ),
        25 => (
            GroupId::orth(2 * n, f, Unit::I),
            direct(u(2 * n, Field::R)),
            lift(GroupId::orth(n, Field::H, Unit::J)),
            Template::ImagHypHalves { n, unit: Unit::I },
            AngleDomain::RealCanonical,
            neg_star,
            T::NegJConj { n, bar: true },
        ),
        _ => return Err(Error::EmptyCell { fid, beta }),
    };
    Ok(FactorizationSpec { fid, beta, params, ambient, k1, k2, template, domain, sigma, tau })
}

/// Outcome of [`consistency_check`]. All residuals are Frobenius norms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConsistencyReport {
    /// `||tau(tau(X)) - X||` and `||sigma(sigma(X)) - X||`, worst case.
    pub involution: f64,
    /// `||tau([X, Y]) - [tau X, tau Y]||`, worst case over both involutions.
    pub automorphism: f64,
    /// `||sigma(X_l) + X_l||` and `||tau(X_l) + X_l||` over the generators.
    pub generator_anti: f64,
    /// Distance of the generators from the ambient Lie algebra.
    pub generator_algebra: f64,
    /// `||[X_l, X_m]||`.
    pub generator_commute: f64,
    /// Relative distance of sampled `k1`, `k2` from the fixed groups of
    /// `sigma` and `tau`.
    pub factor_fixed: f64,
    pub pass: bool,
}

/// Generator step used to read off the middle factor's Lie algebra.
pub const GENERATOR_STEP: f64 = 1e-3;
pub const TAU_TOL: f64 = 1e-10;
pub const GENERATOR_TOL: f64 = 1e-12;

/// Checks that the involutions are involutive automorphisms, that the
/// middle factor generators lie in the common `-1` eigenspace and commute,
/// and that sampled `K` factors are fixed by the matching involution.
pub fn consistency_check(spec: &FactorizationSpec, rng: &mut KakRng, trials: usize) -> Result<ConsistencyReport> {
    let sigma = spec.sigma();
    let tau = spec.tau();
    let mut rep = ConsistencyReport::default();
    for _ in 0..trials {
        let x = spec.ambient.sample_algebra(rng, 1.0);
        let y = spec.ambient.sample_algebra(rng, 1.0);
        for inv in [&sigma, &tau] {
            rep.involution = rep.involution.max(inv.apply(&inv.apply(&x)).distance(&x));
            let lhs = inv.apply(&x.commutator(&y));
            let rhs = inv.apply(&x).commutator(&inv.apply(&y));
            rep.automorphism = rep.automorphism.max(lhs.distance(&rhs));
        }
        let fe = spec.sample_factored(rng, 0.5)?;
        for (inv, k) in [(&sigma, fe.k1_embedded()), (&tau, fe.k2_embedded())] {
            let kk = &inv.apply_group_inverse(&k)? * &k;
            let d = kk.distance(&DenseMatrix::identity(spec.field(), spec.dim()));
            rep.factor_fixed = rep.factor_fixed.max(d / k.frobenius_norm().powi(2).max(1.0));
        }
    }
    let gens = generators(spec)?;
    for x in &gens {
        rep.generator_anti = rep.generator_anti.max((&sigma.apply(x) + x).frobenius_norm());
        rep.generator_anti = rep.generator_anti.max((&tau.apply(x) + x).frobenius_norm());
        rep.generator_algebra = rep.generator_algebra.max(spec.ambient.algebra_residual(x)?);
    }
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            rep.generator_commute = rep.generator_commute.max(x.commutator(y).frobenius_norm());
        }
    }
    rep.pass = rep.involution <= TAU_TOL
        && rep.automorphism <= TAU_TOL
        && rep.factor_fixed <= TAU_TOL
        && rep.generator_anti <= GENERATOR_TOL
        && rep.generator_algebra <= GENERATOR_TOL
        && rep.generator_commute <= GENERATOR_TOL;
    Ok(rep)
}

/// `X_l = log(a(eps e_l)) / eps` for each angle slot.
pub fn generators(spec: &FactorizationSpec) -> Result<Vec<DenseMatrix>> {
    (0..spec.angle_count())
        .map(|l| {
            let mut theta = vec![0.0; spec.angle_count()];
            theta[l] = GENERATOR_STEP;
            let a = spec.template.middle_factor(&theta, spec.field())?;
            Ok(log_near_identity(&a)?.scale(1.0 / GENERATOR_STEP))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::rng_from_seed;

    #[test]
    fn catalogue_has_53_cells() {
        assert_eq!(cells().len(), 53);
        assert!(matches!(spec(3, 1, Params::N { n: 2 }), Err(Error::EmptyCell { fid: 3, beta: 1 })));
        assert!(matches!(spec(17, 4, Params::N { n: 2 }), Err(Error::EmptyCell { .. })));
    }

    #[test]
    fn bad_partitions_are_rejected() {
        assert!(matches!(spec(18, 1, Params::Pq { p: 1, q: 3 }), Err(Error::BadPartition(_))));
        assert!(matches!(spec(4, 2, Params::Pqrs { p: 2, q: 1, r: 1, s: 1 }), Err(Error::BadPartition(_))));
        assert!(matches!(spec(7, 1, Params::Pq { p: 1, q: 1 }), Err(Error::BadPartition(_))));
        assert!(spec(9, 1, Params::Pq { p: 1, q: 3 }).is_ok());
    }

    #[test]
    fn every_cell_composes_into_its_ambient_group() {
        let mut rng = rng_from_seed(1);
        for (fid, beta) in cells() {
            for n in 1..=4 {
                for params in Params::variants(fid, n) {
                    let s = spec(fid, beta, params).unwrap();
                    let fe = s.sample_factored(&mut rng, 0.5).unwrap();
                    assert_eq!(fe.g.rows(), s.dim(), "{}", s.label());
                    let r = s.ambient.membership_residual(&fe.g).unwrap();
                    assert!(r < 1e-10 * s.dim() as f64, "{} residual {r}", s.label());
                }
            }
        }
    }

    #[test]
    fn every_cell_is_consistent() {
        let mut rng = rng_from_seed(2);
        let mut failures = Vec::new();
        for (fid, beta) in cells() {
            for n in 1..=4 {
                for params in Params::variants(fid, n) {
                    let s = spec(fid, beta, params).unwrap();
                    let rep = s.consistency_check(&mut rng, 2).unwrap();
                    if !rep.pass {
                        failures.push(format!("{}: {rep:?}", s.label()));
                    }
                }
            }
        }
        assert!(failures.is_empty(), "{}", failures.join("\n"));
    }

    #[test]
    fn compose_rejects_out_of_domain_angles() {
        let s = spec(4, 1, Params::Pqrs { p: 2, q: 1, r: 2, s: 1 }).unwrap();
        let k1 = vec![DenseMatrix::identity(Field::R, 2), DenseMatrix::identity(Field::R, 1)];
        let k2 = k1.clone();
        assert!(matches!(s.compose(&k1, &[2.0], &k2), Err(Error::DomainViolation { index: 0, .. })));
        assert!(matches!(s.compose(&k1, &[0.1, 0.2], &k2), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn csd_example_composes() {
        let s = spec(4, 1, Params::Pqrs { p: 2, q: 1, r: 2, s: 1 }).unwrap();
        let k1 = vec![DenseMatrix::identity(Field::R, 2), DenseMatrix::identity(Field::R, 1)];
        let g = s.compose(&k1, &[0.3], &k1).unwrap();
        assert!(GroupId::unitary(3, Field::R).membership_residual(&g).unwrap() < 1e-12);
        assert!((g.get(0, 0).w - 0.3f64.cos()).abs() < 1e-15);
    }
}
