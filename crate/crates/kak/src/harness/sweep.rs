//! Registry-wide sweeps: compose-verify trials, consistency checks and
//! decomposition round-trips, aggregated per cell.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use super::report::{verify_with, Thresholds};
use crate::decompose::{decompose, is_decomposable};
use crate::error::{Error, Result};
use crate::groups::rng_from_seed;
use crate::numeric::Field;
use crate::registry::{cells, spec, Params, GENERATOR_TOL, TAU_TOL};

/// Selects cells by fid, optionally narrowed to one field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellSelector {
    pub fid: u8,
    pub beta: Option<u8>,
}

impl CellSelector {
    pub fn matches(&self, fid: u8, beta: u8) -> bool {
        self.fid == fid && self.beta.is_none_or(|b| b == beta)
    }
}

/// Parses `F7`, `7`, `F07` or `F4.R` into a fid (and optional beta).
pub fn parse_fid(s: &str) -> Result<CellSelector> {
    let s = s.trim();
    let (head, field) = match s.split_once('.') {
        Some((h, f)) => (h, Some(Field::parse(f).ok_or_else(|| Error::Parse(format!("unknown field {f:?} in {s:?}")))?)),
        None => (s, None),
    };
    let digits = head.strip_prefix('F').or_else(|| head.strip_prefix('f')).unwrap_or(head);
    let fid: u8 = digits.parse().map_err(|_| Error::Parse(format!("cannot read a factorization id from {s:?}")))?;
    if !(1..=25).contains(&fid) {
        return Err(Error::Parse(format!("factorization ids run from F1 to F25, got {s:?}")));
    }
    Ok(CellSelector { fid, beta: field.map(Field::beta) })
}

/// Comma-separated list of [`parse_fid`] items.
pub fn parse_filter(s: &str) -> Result<Vec<CellSelector>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_fid).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    /// Compose trials per cell, spread round-robin over the parameter
    /// variants of every size.
    pub trials: usize,
    pub seed: u64,
    pub scale: f64,
    pub thresholds: Thresholds,
    pub filter: Option<Vec<CellSelector>>,
    /// Run decomposition round-trips on cells that have an algorithm.
    pub decompose: bool,
    pub parallel: bool,
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sizes: (1..=8).collect(),
            trials: 50,
            seed: 7,
            scale: 1.0,
            thresholds: Thresholds::default(),
            filter: None,
            decompose: true,
            parallel: true,
            report: None,
            csv: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parse("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Parse("sizes must be a nonempty list of positive integers".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Parse(format!("scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }

    pub fn selected_cells(&self) -> Vec<(u8, u8)> {
        cells()
            .into_iter()
            .filter(|&(f, b)| self.filter.as_ref().is_none_or(|sel| sel.iter().any(|s| s.matches(f, b))))
            .collect()
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one task, independent of scheduling order.
pub fn task_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix(seed), |h, &p| splitmix(h ^ p))
}

#[derive(Clone, Debug)]
enum Job {
    Trial { cell: usize, params: Params, trial: usize },
    Consistency { cell: usize, params: Params, config: usize },
}

#[derive(Clone, Debug)]
enum Outcome {
    Trial { cell: usize, compose: Result<super::VerificationReport>, decomposed: Option<Result<super::VerificationReport>> },
    Consistency { cell: usize, result: Result<crate::registry::ConsistencyReport> },
}

/// Aggregated results for one `(fid, beta)` cell.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CellRecord {
    pub fid: u8,
    pub beta: u8,
    pub label: String,
    pub configs: usize,
    pub trials: usize,
    pub compose_pass: usize,
    pub worst_reconstruction: f64,
    pub worst_ambient: f64,
    pub worst_factor: f64,
    pub violations: usize,
    pub consistency_pass: usize,
    /// Worst involution, automorphism or factor-fixedness residual.
    pub worst_tau: f64,
    /// Worst generator residual.
    pub worst_generator: f64,
    pub decompose_trials: usize,
    pub decompose_pass: usize,
    pub worst_roundtrip: f64,
    pub worst_decompose_reconstruction: f64,
    pub worst_decompose_factor: f64,
    /// First few failures, for the report.
    pub failures: Vec<String>,
}

impl CellRecord {
    pub fn compose_ok(&self) -> bool {
        self.compose_pass == self.trials
    }

    pub fn consistency_ok(&self) -> bool {
        self.consistency_pass == self.configs
    }

    pub fn decompose_ok(&self) -> bool {
        self.decompose_pass == self.decompose_trials
    }

    pub fn pass(&self) -> bool {
        self.compose_ok() && self.consistency_ok() && self.decompose_ok()
    }

    fn note(&mut self, msg: String) {
        if self.failures.len() < 3 {
            self.failures.push(msg);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<CellRecord>,
    /// Wall time in milliseconds; never rendered.
    pub millis: f64,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(CellRecord::pass)
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass()).count()
    }

    /// Deterministic text rendering, one record per cell.
    pub fn text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let sizes: Vec<String> = c.sizes.iter().map(usize::to_string).collect();
        writeln!(out, "kak sweep").unwrap();
        writeln!(out, "seed        {}", c.seed).unwrap();
        writeln!(out, "sizes       {}", sizes.join(",")).unwrap();
        writeln!(out, "trials      {} per cell", c.trials).unwrap();
        writeln!(out, "scale       {}", c.scale).unwrap();
        writeln!(out, "thresholds  {}", c.thresholds).unwrap();
        writeln!(out, "consistency tau {TAU_TOL:.1e}, generators {GENERATOR_TOL:.1e}").unwrap();
        for r in &self.records {
            writeln!(out).unwrap();
            writeln!(out, "{} {}", r.label, if r.pass() { "PASS" } else { "FAIL" }).unwrap();
            writeln!(
                out,
                "  compose      {}/{} over {} configs  recon {:.3e}  ambient {:.3e}  factors {:.3e}  violations {}",
                r.compose_pass, r.trials, r.configs, r.worst_reconstruction, r.worst_ambient, r.worst_factor, r.violations
            )
            .unwrap();
            writeln!(
                out,
                "  consistency  {}/{}  tau {:.3e}  generators {:.3e}",
                r.consistency_pass, r.configs, r.worst_tau, r.worst_generator
            )
            .unwrap();
            if r.decompose_trials > 0 {
                writeln!(
                    out,
                    "  decompose    {}/{}  roundtrip {:.3e}  recon {:.3e}  factors {:.3e}",
                    r.decompose_pass,
                    r.decompose_trials,
                    r.worst_roundtrip,
                    r.worst_decompose_reconstruction,
                    r.worst_decompose_factor
                )
                .unwrap();
            }
            for f in &r.failures {
                writeln!(out, "  failure      {f}").unwrap();
            }
        }
        writeln!(out).unwrap();
        writeln!(out, "cells {}/{} pass", self.passed(), self.records.len()).unwrap();
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(
            "cell,fid,beta,pass,configs,trials,compose_pass,worst_reconstruction,worst_ambient,worst_factor,violations,\
             consistency_pass,worst_tau,worst_generator,decompose_trials,decompose_pass,worst_roundtrip\n",
        );
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{:.3e},{:.3e},{:.3e},{},{},{:.3e},{:.3e},{},{},{:.3e}",
                r.label,
                r.fid,
                r.beta,
                r.pass(),
                r.configs,
                r.trials,
                r.compose_pass,
                r.worst_reconstruction,
                r.worst_ambient,
                r.worst_factor,
                r.violations,
                r.consistency_pass,
                r.worst_tau,
                r.worst_generator,
                r.decompose_trials,
                r.decompose_pass,
                r.worst_roundtrip
            )
            .unwrap();
        }
        out
    }

    /// Writes the text report and CSV to the configured paths.
    pub fn write_outputs(&self) -> Result<()> {
        let io = |p: &PathBuf, e: std::io::Error| Error::Io(format!("{}: {e}", p.display()));
        if let Some(p) = &self.config.report {
            std::fs::write(p, self.text()).map_err(|e| io(p, e))?;
        }
        if let Some(p) = &self.config.csv {
            std::fs::write(p, self.csv()).map_err(|e| io(p, e))?;
        }
        Ok(())
    }
}

fn params_index(p: &Params) -> u64 {
    match *p {
        Params::N { n } => n as u64,
        Params::Pq { p, q } => ((p as u64) << 8) | q as u64,
        Params::Pqrs { p, q, r, s } => ((p as u64) << 24) | ((q as u64) << 16) | ((r as u64) << 8) | s as u64,
        Params::Four { p1, q1, p2, q2 } => ((p1 as u64) << 24) | ((q1 as u64) << 16) | ((p2 as u64) << 8) | q2 as u64,
    }
}

fn run(job: &Job, cells: &[(u8, u8)], cfg: &SweepConfig) -> Outcome {
    match *job {
        Job::Trial { cell, params, trial } => {
            let (fid, beta) = cells[cell];
            let seed = task_seed(cfg.seed, &[fid as u64, beta as u64, params_index(&params), trial as u64, 1]);
            let mut rng = rng_from_seed(seed);
            let sampled = spec(fid, beta, params).and_then(|s| s.sample_factored(&mut rng, cfg.scale));
            let fe = match sampled {
                Ok(fe) => fe,
                Err(e) => return Outcome::Trial { cell, compose: Err(e), decomposed: None },
            };
            let mut rep = verify_with(&fe, &cfg.thresholds, None);
            rep.seed = Some(seed);
            let decomposed = (cfg.decompose && is_decomposable(fid, beta)).then(|| {
                let t = Thresholds { membership: cfg.thresholds.membership * 10.0, ..cfg.thresholds };
                decompose(&fe.spec, &fe.g).map(|d| {
                    let mut r = verify_with(&d, &t, Some(&fe.theta));
                    r.seed = Some(seed);
                    r
                })
            });
            Outcome::Trial { cell, compose: Ok(rep), decomposed }
        }
        Job::Consistency { cell, params, config } => {
            let (fid, beta) = cells[cell];
            let seed = task_seed(cfg.seed, &[fid as u64, beta as u64, params_index(&params), config as u64, 2]);
            let mut rng = rng_from_seed(seed);
            let result = spec(fid, beta, params).and_then(|s| s.consistency_check(&mut rng, 1));
            Outcome::Consistency { cell, result }
        }
    }
}

#[cfg(feature = "parallel")]
fn run_all(jobs: &[Job], cells: &[(u8, u8)], cfg: &SweepConfig) -> Vec<Outcome> {
    use rayon::prelude::*;
    if cfg.parallel {
        jobs.par_iter().map(|j| run(j, cells, cfg)).collect()
    } else {
        jobs.iter().map(|j| run(j, cells, cfg)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_all(jobs: &[Job], cells: &[(u8, u8)], cfg: &SweepConfig) -> Vec<Outcome> {
    jobs.iter().map(|j| run(j, cells, cfg)).collect()
}

/// Runs the sweep. Individual failures are recorded, never propagated.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let start = Instant::now();
    let cells = config.selected_cells();
    let mut records: Vec<CellRecord> = Vec::with_capacity(cells.len());
    let mut jobs = Vec::new();
    for (ci, &(fid, beta)) in cells.iter().enumerate() {
        let configs: Vec<Params> = config.sizes.iter().flat_map(|&n| Params::variants(fid, n)).collect();
        let label = spec(fid, beta, configs[0]).map(|s| s.cell_label()).unwrap_or_else(|_| format!("F{fid:02}.{beta}"));
        records.push(CellRecord { fid, beta, label, configs: configs.len(), trials: config.trials, ..Default::default() });
        for (k, &params) in configs.iter().enumerate() {
            jobs.push(Job::Consistency { cell: ci, params, config: k });
        }
        for trial in 0..config.trials {
            jobs.push(Job::Trial { cell: ci, params: configs[trial % configs.len()], trial });
        }
    }
    for outcome in run_all(&jobs, &cells, config) {
        match outcome {
            Outcome::Trial { cell, compose, decomposed } => {
                let r = &mut records[cell];
                match compose {
                    Ok(rep) => {
                        r.worst_reconstruction = r.worst_reconstruction.max(rep.reconstruction);
                        r.worst_ambient = r.worst_ambient.max(rep.ambient);
                        r.worst_factor = r.worst_factor.max(rep.worst_factor());
                        r.violations += rep.violations;
                        if rep.pass {
                            r.compose_pass += 1;
                        } else {
                            r.note(format!("compose {} seed {}", rep.label, rep.seed.unwrap_or(0)));
                        }
                    }
                    Err(e) => r.note(format!("compose error: {e}")),
                }
                if let Some(d) = decomposed {
                    r.decompose_trials += 1;
                    match d {
                        Ok(rep) => {
                            r.worst_roundtrip = r.worst_roundtrip.max(rep.roundtrip.unwrap_or(f64::INFINITY));
                            r.worst_decompose_reconstruction = r.worst_decompose_reconstruction.max(rep.reconstruction);
                            r.worst_decompose_factor = r.worst_decompose_factor.max(rep.worst_factor());
                            if rep.pass {
                                r.decompose_pass += 1;
                            } else {
                                r.note(format!("decompose {} seed {}", rep.label, rep.seed.unwrap_or(0)));
                            }
                        }
                        Err(e) => r.note(format!("decompose error: {e}")),
                    }
                }
            }
            Outcome::Consistency { cell, result } => {
                let r = &mut records[cell];
                match result {
                    Ok(c) => {
                        r.worst_tau = r.worst_tau.max(c.involution).max(c.automorphism).max(c.factor_fixed);
                        r.worst_generator =
                            r.worst_generator.max(c.generator_anti).max(c.generator_algebra).max(c.generator_commute);
                        if c.pass {
                            r.consistency_pass += 1;
                        } else {
                            r.note("consistency check failed".into());
                        }
                    }
                    Err(e) => r.note(format!("consistency error: {e}")),
                }
            }
        }
    }
    Ok(SweepReport { config: config.clone(), records, millis: start.elapsed().as_secs_f64() * 1e3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fid_parsing() {
        assert_eq!(parse_fid("F7").unwrap(), CellSelector { fid: 7, beta: None });
        assert_eq!(parse_fid("f09").unwrap(), CellSelector { fid: 9, beta: None });
        assert_eq!(parse_fid("4.C").unwrap(), CellSelector { fid: 4, beta: Some(2) });
        assert!(parse_fid("F26").is_err());
        assert!(parse_fid("G1").is_err());
        assert_eq!(parse_filter("F1, F9").unwrap().len(), 2);
    }

    #[test]
    fn filter_f7_has_three_cells() {
        let cfg = SweepConfig { filter: Some(parse_filter("F7").unwrap()), ..Default::default() };
        assert_eq!(cfg.selected_cells(), vec![(7, 1), (7, 2), (7, 4)]);
    }

    #[test]
    fn small_sweep_is_deterministic_and_passes() {
        let cfg = SweepConfig {
            sizes: vec![2, 3],
            trials: 4,
            filter: Some(parse_filter("F4,F9,F18.C").unwrap()),
            ..Default::default()
        };
        let a = sweep(&cfg).unwrap();
        let b = sweep(&SweepConfig { parallel: false, ..cfg.clone() }).unwrap();
        assert_eq!(a.text(), b.text());
        assert!(a.all_pass(), "{}", a.text());
        assert_eq!(a.records.len(), cfg.selected_cells().len());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(sweep(&SweepConfig { trials: 0, ..Default::default() }).is_err());
        assert!(sweep(&SweepConfig { sizes: vec![], ..Default::default() }).is_err());
    }
}
