//! Per-element verification.

use std::fmt;
use std::time::Instant;

use crate::registry::FactoredElement;

/// Residual thresholds. Membership and reconstruction scale with the
/// matrix size `n`; reconstruction also with `||g||_F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// Ambient and factor membership: `residual <= membership * n`.
    pub membership: f64,
    /// `||k1 a k2 - g|| <= reconstruction * n * max(1, ||g||)`.
    pub reconstruction: f64,
    /// Largest allowed deviation of recovered canonical angles.
    pub roundtrip: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { membership: 1e-10, reconstruction: 1e-9, roundtrip: 1e-8 }
    }
}

impl Thresholds {
    /// Same coefficient for membership and reconstruction.
    pub fn with_tol(tol: f64) -> Self {
        Thresholds { membership: tol, reconstruction: tol, ..Thresholds::default() }
    }
}

impl fmt::Display for Thresholds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "membership {:.1e}*n, reconstruction {:.1e}*n*max(1,|g|), roundtrip {:.1e}",
            self.membership, self.reconstruction, self.roundtrip
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub label: String,
    pub reconstruction: f64,
    /// Membership residual of `g` in the ambient group.
    pub ambient: f64,
    /// `(factor label, membership residual)` for every raw factor.
    pub factors: Vec<(String, f64)>,
    pub violations: usize,
    /// Largest deviation of canonical angles from a reference, if any.
    pub roundtrip: Option<f64>,
    pub pass: bool,
    pub seed: Option<u64>,
    /// Wall time of the verification. Not part of the rendered text.
    pub millis: f64,
}

impl VerificationReport {
    pub fn worst_factor(&self) -> f64 {
        self.factors.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    fn judge(&mut self, n: usize, g_norm: f64, t: &Thresholds) {
        let n = n.max(1) as f64;
        let memb = t.membership * n;
        self.pass = self.reconstruction <= t.reconstruction * n * g_norm.max(1.0)
            && self.ambient <= memb
            && self.factors.iter().all(|(_, r)| *r <= memb)
            && self.violations == 0
            && self.roundtrip.is_none_or(|d| d <= t.roundtrip);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.label, if self.pass { "PASS" } else { "FAIL" })?;
        if let Some(seed) = self.seed {
            writeln!(f, "  seed            {seed}")?;
        }
        writeln!(f, "  reconstruction  {:.3e}", self.reconstruction)?;
        writeln!(f, "  ambient         {:.3e}", self.ambient)?;
        for (name, r) in &self.factors {
            writeln!(f, "  {name:<15} {r:.3e}")?;
        }
        writeln!(f, "  violations      {}", self.violations)?;
        if let Some(d) = self.roundtrip {
            writeln!(f, "  roundtrip       {d:.3e}")?;
        }
        Ok(())
    }
}

/// Checks `fe` against the default thresholds.
pub fn verify_factored(fe: &FactoredElement) -> VerificationReport {
    verify_with(fe, &Thresholds::default(), None)
}

/// Checks reconstruction, memberships and the angle domain of `fe`. With
/// `reference` angles, also the deviation of the canonical angles.
pub fn verify_with(fe: &FactoredElement, t: &Thresholds, reference: Option<&[f64]>) -> VerificationReport {
    let start = Instant::now();
    let spec = &fe.spec;
    let inf_on_err = |r: crate::Result<f64>| r.unwrap_or(f64::INFINITY);
    // Built without the domain check so out-of-range angles still get a residual.
    let rebuilt = || -> crate::Result<_> {
        let a = spec.template.middle_factor(&fe.theta, spec.field())?;
        Ok(&(&spec.embed_k1(&fe.k1)? * &a) * &spec.embed_k2(&fe.k2)?)
    };
    let reconstruction = match rebuilt() {
        Ok(m) if m.rows() == fe.g.rows() && m.cols() == fe.g.cols() => m.distance(&fe.g),
        _ => f64::INFINITY,
    };
    let ambient = inf_on_err(spec.ambient.membership_residual(&fe.g));
    let mut factors = Vec::new();
    for (side, fs, raw) in [("k1", &spec.k1, &fe.k1), ("k2", &spec.k2, &fe.k2)] {
        for (i, g) in fs.groups.iter().enumerate() {
            let r = raw.get(i).map_or(f64::INFINITY, |m| inf_on_err(g.membership_residual(m)));
            factors.push((format!("{side}[{i}] {g}"), r));
        }
    }
    let violations = if spec.domain == crate::templates::AngleDomain::RealCanonical {
        fe.theta.iter().filter(|t| !t.is_finite()).count()
    } else {
        spec.domain.violations(&fe.theta)
    };
    let roundtrip = reference.map(|r| theta_deviation(spec, &fe.theta, r));
    let mut rep = VerificationReport {
        label: spec.label(),
        reconstruction,
        ambient,
        factors,
        violations,
        roundtrip,
        pass: false,
        seed: None,
        millis: 0.0,
    };
    rep.judge(spec.dim(), fe.g.frobenius_norm(), t);
    rep.millis = start.elapsed().as_secs_f64() * 1e3;
    rep
}

/// Largest entrywise gap between the canonical forms of two angle lists.
pub fn theta_deviation(spec: &crate::registry::FactorizationSpec, a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (ca, cb) = (spec.template.canonicalize(a), spec.template.canonicalize(b));
    ca.iter().zip(&cb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::rng_from_seed;
    use crate::numeric::{DenseMatrix, Quaternion};
    use crate::registry::{spec, Params};

    #[test]
    fn identity_element_passes() {
        let s = spec(7, 2, Params::N { n: 3 }).unwrap();
        let i = DenseMatrix::identity(s.field(), 3);
        let fe = FactoredElement { spec: s, k1: vec![i.clone()], theta: vec![0.0; 3], k2: vec![i.clone()], g: i };
        let rep = verify_factored(&fe);
        assert!(rep.pass);
        assert_eq!(rep.reconstruction, 0.0);
        assert_eq!(rep.worst_factor(), 0.0);
    }

    #[test]
    fn sample_passes_and_corruption_fails() {
        let mut rng = rng_from_seed(31);
        let s = spec(9, 1, Params::Pq { p: 4, q: 2 }).unwrap();
        let mut fe = s.sample_factored(&mut rng, 1.0).unwrap();
        assert!(verify_factored(&fe).pass);
        let v = fe.g.get(1, 2);
        fe.g.set(1, 2, v + Quaternion::real(1e-3));
        assert!(!verify_factored(&fe).pass);
    }

    #[test]
    fn domain_violation_fails() {
        let s = spec(4, 1, Params::Pqrs { p: 1, q: 1, r: 1, s: 1 }).unwrap();
        let i = DenseMatrix::identity(s.field(), 1);
        let theta = vec![2.0];
        let g = s.template.middle_factor(&theta, s.field()).unwrap();
        let fe = FactoredElement { spec: s, k1: vec![i.clone(), i.clone()], theta, k2: vec![i.clone(), i], g };
        let rep = verify_factored(&fe);
        assert_eq!(rep.violations, 1);
        assert!(!rep.pass);
    }
}
