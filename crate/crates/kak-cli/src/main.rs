use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kak::decompose::{decompose, fold, is_decomposable, FoldSide};
use kak::groups::rng_from_seed;
use kak::harness::{
    parse_fid, parse_filter, read_factors, read_matrix, sweep, verify_with, write_factors, write_matrix, ParamArgs,
    SweepConfig, Thresholds, VerificationReport,
};
use kak::registry::{cells, param_kind, spec, FactorizationSpec, Params};
use kak::Error;

#[derive(Parser)]
#[command(name = "kak", version, about = "Sample, factor and verify KAK decompositions of classical matrix groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every (factorization, field) cell.
    List,
    /// Draw a random factored element and write the matrix.
    Sample {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Output matrix file.
        #[arg(long)]
        out: PathBuf,
        /// Also write the sampled factors into this directory.
        #[arg(long)]
        factors: Option<PathBuf>,
    },
    /// Factor a matrix with the cell's decomposition algorithm.
    Decompose {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Directory for the factors.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check a matrix, or a matrix with its factors, against a cell.
    Verify {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Directory written by `sample --factors` or `decompose --out`.
        #[arg(long)]
        factors: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compose-verify, consistency and round-trip checks over the registry.
    Sweep {
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Compose trials per cell.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated cells, e.g. `F1,F9` or `F4.R`.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Skip decomposition round-trips.
        #[arg(long)]
        no_decompose: bool,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Fold a factored element into its eigen-like form.
    Fold {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        side: FoldSide,
        /// Matrix to decompose and fold; sampled from `--seed` if absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Output file for the folded matrix.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args)]
struct CellArgs {
    /// Factorization id, e.g. `F9`, or `F9.R` to fix the field as well.
    #[arg(long)]
    fact: String,
    /// Field: 1 (R), 2 (C) or 4 (H).
    #[arg(long)]
    beta: Option<u8>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    p1: Option<usize>,
    #[arg(long)]
    q1: Option<usize>,
    #[arg(long)]
    p2: Option<usize>,
    #[arg(long)]
    q2: Option<usize>,
}

impl CellArgs {
    fn spec(&self) -> kak::Result<FactorizationSpec> {
        let sel = parse_fid(&self.fact)?;
        let beta = match (sel.beta, self.beta) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Parse(format!("--fact {} and --beta {b} disagree", self.fact)));
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::Parse("give the field with --beta or as in F9.R".into())),
        };
        let args = ParamArgs {
            n: self.n,
            p: self.p,
            q: self.q,
            r: self.r,
            s: self.s,
            p1: self.p1,
            q1: self.q1,
            p2: self.p2,
            q2: self.q2,
        };
        spec(sel.fid, beta, args.resolve(sel.fid)?)
    }
}

/// Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.
enum Outcome {
    Pass,
    Fail,
}

fn exit_for(e: &Error) -> u8 {
    if e.is_usage() {
        2
    } else {
        1
    }
}

fn thresholds(tol: Option<f64>) -> Thresholds {
    tol.map_or_else(Thresholds::default, Thresholds::with_tol)
}

fn print_report(rep: &VerificationReport) -> Outcome {
    print!("{rep}");
    if rep.pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn list() -> Outcome {
    println!("{} cells", cells().len());
    for (fid, beta) in cells() {
        let params = Params::variants(fid, 4).into_iter().next().expect("size 4 always has a variant");
        let s = spec(fid, beta, params).expect("catalogue cells build");
        println!(
            "{:<6} {:<13} {:<10} e.g. {:<18} {} = [{}] a [{}]{}",
            s.cell_label(),
            format!("{:?}", param_kind(fid)).split_whitespace().next().unwrap_or(""),
            format!("{:?}", s.domain),
            s.params.to_string(),
            s.ambient,
            s.k1.describe(),
            s.k2.describe(),
            if is_decomposable(fid, beta) { "  (decompose)" } else { "" }
        );
    }
    Outcome::Pass
}

fn run(cli: Cli) -> kak::Result<Outcome> {
    match cli.command {
        Command::List => Ok(list()),
        Command::Sample { cell, seed, scale, out, factors } => {
            let s = cell.spec()?;
            let fe = s.sample_factored(&mut rng_from_seed(seed), scale)?;
            write_matrix(&fe.g, &out)?;
            if let Some(dir) = factors {
                write_factors(&fe, dir)?;
            }
            println!("{} seed {seed}", s.label());
            println!("theta {:?}", fe.theta);
            Ok(Outcome::Pass)
        }
        Command::Decompose { cell, input, out, tol } => {
            let s = cell.spec()?;
            let g = read_matrix(&input)?;
            let fe = decompose(&s, &g)?;
            if let Some(dir) = out {
                write_factors(&fe, dir)?;
            }
            println!("theta {:?}", fe.theta);
            Ok(print_report(&verify_with(&fe, &thresholds(tol), None)))
        }
        Command::Verify { cell, input, factors, tol } => {
            let s = cell.spec()?;
            let g = read_matrix(&input)?;
            let t = thresholds(tol);
            match factors {
                Some(dir) => Ok(print_report(&verify_with(&read_factors(&s, &g, dir)?, &t, None))),
                None if is_decomposable(s.fid, s.beta) => Ok(print_report(&verify_with(&decompose(&s, &g)?, &t, None))),
                None => {
                    let r = s.ambient.membership_residual(&g)?;
                    let ok = r <= t.membership * s.dim() as f64;
                    println!("{} {}", s.label(), if ok { "PASS" } else { "FAIL" });
                    println!("  ambient         {r:.3e}");
                    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
                }
            }
        }
        Command::Sweep {
            min_n,
            max_n,
            trials,
            seed,
            scale,
            tol,
            filter,
            report,
            csv,
            no_decompose,
            sequential,
        } => {
            let cfg = SweepConfig {
                sizes: (min_n..=max_n).collect(),
                trials,
                seed,
                scale,
                thresholds: thresholds(tol),
                filter: filter.as_deref().map(parse_filter).transpose()?,
                decompose: !no_decompose,
                parallel: !sequential,
                report,
                csv,
            };
            let rep = sweep(&cfg)?;
            rep.write_outputs()?;
            if cfg.report.is_none() {
                print!("{}", rep.text());
            } else {
                println!("cells {}/{} pass", rep.passed(), rep.records.len());
            }
            Ok(if rep.all_pass() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Fold { cell, side, input, seed, scale, out, tol } => {
            let s = cell.spec()?;
            let fe = match input {
                Some(path) => decompose(&s, &read_matrix(path)?)?,
                None => s.sample_factored(&mut rng_from_seed(seed), scale)?,
            };
            let f = fold(&fe, side)?;
            if let Some(path) = out {
                write_matrix(&f.matrix, path)?;
            }
            let bound = tol.unwrap_or(1e-9) * fe.g.frobenius_norm().powi(2);
            let ok = f.residual <= bound;
            println!("{} {:?} fold {}", s.label(), side, if ok { "PASS" } else { "FAIL" });
            println!("  residual        {:.3e}", f.residual);
            println!("  bound           {bound:.3e}");
            println!("  theta           {:?}", fe.theta);
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
