//! Size parameters from loose command-line style arguments.

use crate::error::{Error, Result};
use crate::registry::{param_kind, ParamKind, Params};

/// Whatever subset of sizes the caller supplied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParamArgs {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub p1: Option<usize>,
    pub q1: Option<usize>,
    pub p2: Option<usize>,
    pub q2: Option<usize>,
}

impl ParamArgs {
    /// Picks the parameters `fid` needs. A bare `n` falls back to the
    /// first variant of that size; `p, q` without `r, s` for the CS cell
    /// means the square partition.
    pub fn resolve(&self, fid: u8) -> Result<Params> {
        let missing = |what: &str| Error::Parse(format!("F{fid} needs {what}"));
        let from_n = || {
            self.n
                .and_then(|n| Params::variants(fid, n).into_iter().next())
                .ok_or_else(|| missing("sizes (or --n)"))
        };
        match param_kind(fid) {
            ParamKind::N => Ok(Params::N { n: self.n.ok_or_else(|| missing("--n"))? }),
            ParamKind::Pq { .. } => match (self.p, self.q) {
                (Some(p), Some(q)) => Ok(Params::Pq { p, q }),
                (None, None) => from_n(),
                _ => Err(missing("both --p and --q")),
            },
            ParamKind::Pqrs => match (self.p, self.q, self.r, self.s) {
                (Some(p), Some(q), Some(r), Some(s)) => Ok(Params::Pqrs { p, q, r, s }),
                (Some(p), Some(q), None, None) => Ok(Params::Pqrs { p, q, r: p.max(q), s: p.min(q) }),
                (None, None, None, None) => from_n(),
                _ => Err(missing("--p --q, optionally with --r --s")),
            },
            ParamKind::Four => match (self.p1, self.q1, self.p2, self.q2) {
                (Some(p1), Some(q1), Some(p2), Some(q2)) => Ok(Params::Four { p1, q1, p2, q2 }),
                (None, None, None, None) => from_n(),
                _ => Err(missing("--p1 --q1 --p2 --q2")),
            },
        }
    }
}
