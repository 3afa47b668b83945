//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints one line; exits nonzero if any of them fails.

use std::fmt::Write as _;
use std::process::ExitCode;

use kak::decompose::{
    conjugate_symplectic_svd, decompose, fold, identity_residuals, nonsquare_svd, odo, perplectic_svd_complex,
    perplectic_svd_real, structure_isomorphism, takagi, williamson, Direction, FoldSide, IsoKind, StructuredSvd,
};
use kak::groups::{random_matrix, rng_from_seed, GroupId, KakRng};
use kak::harness::{sweep, theta_deviation, SweepConfig, Thresholds};
use kak::numeric::{from_na, symplectic_j, to_na, DenseMatrix, Field, Quaternion};
use kak::registry::{cells, param_kind, spec, ParamKind, Params};
use nalgebra::{Complex, DMatrix};

const MAX_N: usize = 8;
const COMPOSE_TRIALS: usize = 50;
const MEMBERSHIP_TOL: f64 = 1e-10;
const TAU_TOL: f64 = 1e-10;
const GENERATOR_TOL: f64 = 1e-12;
const ROUNDTRIP_TRIALS: usize = 50;
const THETA_TOL: f64 = 1e-8;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const DECOMPOSED_FACTOR_TOL: f64 = 1e-9;
const ODO_TOL: f64 = 1e-9;
const ODO_EIG_TOL: f64 = 1e-8;
const TAKAGI_TOL: f64 = 1e-9;
const TAKAGI_VALUE_TOL: f64 = 1e-8;
const WILLIAMSON_TOL: f64 = 1e-8;
const NONSQUARE_TOL: f64 = 1e-8;
const FOLD_TOL: f64 = 1e-9;
const DOUBLING_SAMPLES: usize = 100;
const IDENTITY_TRIALS: usize = 1000;
const IDENTITY_FACTOR: f64 = 10.0;
const STRUCTURED_TOL: f64 = 1e-9;
const PALINDROME_TOL: f64 = 1e-8;

/// Non-empty cells of the catalogue, written out by hand.
const EXPECTED_CELLS: [(u8, &[u8]); 25] = [
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

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn all_configs(fid: u8) -> Vec<Params> {
    (1..=MAX_N).flat_map(|n| Params::variants(fid, n)).collect()
}

fn criterion_1() -> Outcome {
    let expected: Vec<(u8, u8)> =
        EXPECTED_CELLS.iter().flat_map(|&(fid, betas)| betas.iter().map(move |&b| (fid, b))).collect();
    let got = cells();
    let ok = expected.len() == 53 && got == expected;
    outcome(ok, format!("{} cells listed, {} expected", got.len(), expected.len()))
}

fn criterion_2() -> Outcome {
    let mut rng = rng_from_seed(1002);
    let (mut worst_ambient, mut worst_factor) = (0.0f64, 0.0f64);
    let mut passed = 0;
    let mut bad = Vec::new();
    for (fid, beta) in cells() {
        let configs = all_configs(fid);
        let mut cell_ok = true;
        let (mut square, mut tall, mut empty_sine) = (false, false, false);
        for trial in 0..COMPOSE_TRIALS.max(configs.len()) {
            let params = configs[trial % configs.len()];
            match params {
                Params::Pq { p, q } | Params::Pqrs { p, q, .. } => {
                    square |= p == q;
                    tall |= p > q;
                }
                _ => {}
            }
            if let Params::Pqrs { s: 0, .. } = params {
                empty_sine = true;
            }
            let s = spec(fid, beta, params).expect("variant builds");
            let fe = s.sample_factored(&mut rng, 1.0).expect("sampling succeeds");
            let bound = MEMBERSHIP_TOL * s.dim() as f64;
            let amb = s.ambient.membership_residual(&fe.g).unwrap_or(f64::INFINITY);
            let mut fac = 0.0f64;
            for (fs, raw) in [(&s.k1, &fe.k1), (&s.k2, &fe.k2)] {
                for (g, m) in fs.groups.iter().zip(raw) {
                    fac = fac.max(g.membership_residual(m).unwrap_or(f64::INFINITY));
                }
            }
            worst_ambient = worst_ambient.max(amb / s.dim() as f64);
            worst_factor = worst_factor.max(fac / s.dim() as f64);
            cell_ok &= amb <= bound && fac <= bound;
        }
        let coverage = match param_kind(fid) {
            ParamKind::Pq { .. } => square && tall,
            ParamKind::Pqrs => square && tall && empty_sine,
            _ => true,
        };
        if cell_ok && coverage {
            passed += 1;
        } else {
            bad.push(format!("F{fid}.{beta}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{passed}/53 cells, worst ambient/n {worst_ambient:.2e}, factor/n {worst_factor:.2e} (tol {MEMBERSHIP_TOL:.0e}) {}",
            bad.join(" ")
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = rng_from_seed(1003);
    let (mut tau, mut gen) = (0.0f64, 0.0f64);
    let mut bad = Vec::new();
    for (fid, beta) in cells() {
        let mut ok = true;
        for params in all_configs(fid) {
            let s = spec(fid, beta, params).expect("variant builds");
            let r = s.consistency_check(&mut rng, 2).expect("consistency runs");
            let t = r.involution.max(r.automorphism).max(r.factor_fixed);
            let g = r.generator_anti.max(r.generator_algebra).max(r.generator_commute);
            tau = tau.max(t);
            gen = gen.max(g);
            ok &= t <= TAU_TOL && g <= GENERATOR_TOL;
        }
        if !ok {
            bad.push(format!("F{fid}.{beta}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("worst involution {tau:.2e} (tol {TAU_TOL:.0e}), generators {gen:.2e} (tol {GENERATOR_TOL:.0e}) {}", bad.join(" ")),
    )
}

fn criterion_4() -> Outcome {
    const TARGETS: [(u8, u8); 13] =
        [(1, 2), (4, 1), (4, 2), (7, 1), (7, 2), (7, 4), (9, 1), (9, 2), (10, 1), (13, 2), (18, 1), (18, 2), (23, 2)];
    let mut rng = rng_from_seed(1004);
    let (mut theta_worst, mut rec_worst, mut fac_worst) = (0.0f64, 0.0f64, 0.0f64);
    let mut bad = Vec::new();
    for (fid, beta) in TARGETS {
        let configs = all_configs(fid);
        let mut ok = true;
        let mut general = false;
        for trial in 0..ROUNDTRIP_TRIALS {
            let params = configs[trial % configs.len()];
            if let Params::Pqrs { p, r, .. } = params {
                general |= p != r;
            }
            let s = spec(fid, beta, params).expect("variant builds");
            let fe = s.sample_factored(&mut rng, 1.0).expect("sampling succeeds");
            let n = s.dim() as f64;
            match decompose(&s, &fe.g) {
                Ok(d) => {
                    let dt = theta_deviation(&s, &d.theta, &fe.theta);
                    let rec = d.reconstruction_residual() / (n * fe.g.frobenius_norm().max(1.0));
                    let mut fac = 0.0f64;
                    for (fs, raw) in [(&s.k1, &d.k1), (&s.k2, &d.k2)] {
                        for (g, m) in fs.groups.iter().zip(raw) {
                            fac = fac.max(g.membership_residual(m).unwrap_or(f64::INFINITY) / n);
                        }
                    }
                    theta_worst = theta_worst.max(dt);
                    rec_worst = rec_worst.max(rec);
                    fac_worst = fac_worst.max(fac);
                    ok &= dt <= THETA_TOL && rec <= RECONSTRUCTION_TOL && fac <= DECOMPOSED_FACTOR_TOL;
                }
                Err(e) => {
                    ok = false;
                    bad.push(format!("{}: {e}", s.label()));
                }
            }
        }
        if fid == 4 && !general {
            ok = false;
        }
        if !ok {
            bad.push(format!("F{fid}.{beta}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "13 cells x {ROUNDTRIP_TRIALS}, worst theta {theta_worst:.2e} (tol {THETA_TOL:.0e}), recon/(n|g|) {rec_worst:.2e} (tol {RECONSTRUCTION_TOL:.0e}), factor/n {fac_worst:.2e} {}",
            bad.join(" ")
        ),
    )
}

fn real_part(m: &DenseMatrix) -> DenseMatrix {
    m.map(|q| Quaternion::from(q.w)).project_to(Field::R)
}

fn imag_part(m: &DenseMatrix) -> DenseMatrix {
    m.map(|q| Quaternion::from(q.x)).project_to(Field::R)
}

/// Largest distance in a greedy matching of two multisets of complex numbers.
fn match_spectra(expected: &[Complex<f64>], oracle: &[Complex<f64>]) -> f64 {
    if expected.len() != oracle.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; oracle.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let (k, d) = oracle
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, o)| (k, (o - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("same length");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

fn criterion_5() -> Outcome {
    let mut rng = rng_from_seed(1005);
    let (mut sep_worst, mut eig_worst) = (0.0f64, 0.0f64);
    let mut ok = true;
    for trial in 0..60 {
        let n = 1 + trial % MAX_N;
        let u = GroupId::unitary(n, Field::C).sample_group(&mut rng, 1.0);
        let fe = match odo(&u) {
            Ok(fe) => fe,
            Err(_) => {
                ok = false;
                continue;
            }
        };
        let c = DenseMatrix::diag_real(Field::R, &fe.theta.iter().map(|t| t.cos()).collect::<Vec<_>>());
        let s = DenseMatrix::diag_real(Field::R, &fe.theta.iter().map(|t| t.sin()).collect::<Vec<_>>());
        let (o1, o2) = (&fe.k1[0], &fe.k2[0]);
        let sep = real_part(&u).distance(&(&(o1 * &c) * o2)) + imag_part(&u).distance(&(&(o1 * &s) * o2));
        sep_worst = sep_worst.max(sep / n as f64);
        // Oracle: eigenvalues of realify(U^T U) are e^{2i theta} and their conjugates.
        let m = (&u.t() * &u).realify().expect("complex input");
        let oracle: Vec<Complex<f64>> = to_na::<f64>(&m).expect("real").complex_eigenvalues().iter().copied().collect();
        let expected: Vec<Complex<f64>> = fe
            .theta
            .iter()
            .flat_map(|t| [Complex::from_polar(1.0, 2.0 * t), Complex::from_polar(1.0, -2.0 * t)])
            .collect();
        let e = match_spectra(&expected, &oracle);
        eig_worst = eig_worst.max(e);
        ok &= sep <= ODO_TOL * n as f64 && e <= ODO_EIG_TOL;
    }
    outcome(
        ok,
        format!("separation/n {sep_worst:.2e} (tol {ODO_TOL:.0e}), spectrum vs eigen oracle {eig_worst:.2e} (tol {ODO_EIG_TOL:.0e})"),
    )
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_6() -> Outcome {
    let mut rng = rng_from_seed(1006);
    let (mut res_worst, mut val_worst) = (0.0f64, 0.0f64);
    let mut ok = true;
    for trial in 0..60 {
        let n = 1 + trial % MAX_N;
        let x = random_matrix(Field::C, n, n, &mut rng, 1.0);
        let a = &x + &x.t();
        let Ok((u, lambda)) = takagi(&a) else {
            ok = false;
            continue;
        };
        let rebuilt = &(&u * &DenseMatrix::diag_real(Field::C, &lambda)) * &u.t();
        let res = rebuilt.distance(&a) / (n as f64 * a.frobenius_norm());
        let oracle = sorted_desc(to_na::<Complex<f64>>(&a).expect("complex").singular_values().iter().copied().collect());
        let gap = max_gap(&sorted_desc(lambda), &oracle);
        res_worst = res_worst.max(res);
        val_worst = val_worst.max(gap);
        ok &= res <= TAKAGI_TOL && gap <= TAKAGI_VALUE_TOL;
    }
    outcome(
        ok,
        format!("residual/(n|A|) {res_worst:.2e} (tol {TAKAGI_TOL:.0e}), values vs SVD oracle {val_worst:.2e} (tol {TAKAGI_VALUE_TOL:.0e})"),
    )
}

fn random_spd(n2: usize, rng: &mut KakRng) -> DenseMatrix {
    let x = random_matrix(Field::R, n2, n2, rng, 1.0);
    &(&x * &x.t()) + &DenseMatrix::identity(Field::R, n2)
}

fn criterion_7() -> Outcome {
    let mut rng = rng_from_seed(1007);
    let (mut normal, mut oracle_gap, mut invariance) = (0.0f64, 0.0f64, 0.0f64);
    let mut ok = true;
    for trial in 0..40 {
        let n = 1 + trial % 4;
        let a = random_spd(2 * n, &mut rng);
        let Ok((s, d)) = williamson(&a) else {
            ok = false;
            continue;
        };
        let target = DenseMatrix::diag_real(Field::R, &[d.clone(), d.clone()].concat());
        let r = (&(&s * &a) * &s.t()).distance(&target) / a.frobenius_norm();
        // Oracle: J A has eigenvalues +-i d.
        let ja = to_na::<f64>(&(&symplectic_j(Field::R, n) * &a)).expect("real");
        let mut pos: Vec<f64> = ja.complex_eigenvalues().iter().filter(|z| z.im > 0.0).map(|z| z.im).collect();
        pos = sorted_desc(pos);
        let gap = max_gap(&sorted_desc(d.clone()), &pos);
        // Congruence by a random symplectic matrix keeps the values.
        let m = GroupId::sp(n, Field::R).sample_group(&mut rng, 0.5);
        let inv = match williamson(&(&(&m * &a) * &m.t())) {
            Ok((_, d2)) => max_gap(&sorted_desc(d.clone()), &sorted_desc(d2)) / d[0].max(1.0),
            Err(_) => f64::INFINITY,
        };
        normal = normal.max(r);
        oracle_gap = oracle_gap.max(gap);
        invariance = invariance.max(inv);
        ok &= r <= WILLIAMSON_TOL && gap <= WILLIAMSON_TOL && inv <= WILLIAMSON_TOL;
    }
    outcome(
        ok,
        format!(
            "normal form/|A| {normal:.2e}, vs eig(JA) {oracle_gap:.2e}, congruence invariance {invariance:.2e} (tol {WILLIAMSON_TOL:.0e})"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = rng_from_seed(1008);
    let mut worst = 0.0f64;
    let mut ok = true;
    for trial in 0..40 {
        let (r, c) = if trial % 2 == 0 { (5, 3) } else { (4, 4) };
        let x = random_matrix(Field::R, r, c, &mut rng, 1.0);
        let oracle = sorted_desc(to_na::<f64>(&x).expect("real").singular_values().iter().copied().collect());
        let gap = match nonsquare_svd(&x) {
            Ok((_, sh, _)) => max_gap(&sorted_desc(sh), &oracle),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(gap);
        ok &= gap <= NONSQUARE_TOL;
    }
    outcome(ok, format!("5x3 and 4x4, values vs SVD oracle {worst:.2e} (tol {NONSQUARE_TOL:.0e})"))
}

fn criterion_9() -> Outcome {
    let mut rng = rng_from_seed(1009);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (fid, beta) in cells() {
        let mut ok = true;
        for params in all_configs(fid) {
            let s = spec(fid, beta, params).expect("variant builds");
            let fe = s.sample_factored(&mut rng, 0.7).expect("sampling succeeds");
            let scale = fe.g.frobenius_norm().powi(2);
            for side in [FoldSide::Right, FoldSide::Left] {
                let r = fold(&fe, side).map_or(f64::INFINITY, |f| f.residual / scale);
                worst = worst.max(r);
                ok &= r <= FOLD_TOL;
            }
        }
        if !ok {
            bad.push(format!("F{fid}.{beta}"));
        }
    }
    outcome(bad.is_empty(), format!("both sides, worst residual/|g|^2 {worst:.2e} (tol {FOLD_TOL:.0e}) {}", bad.join(" ")))
}

fn criterion_10() -> Outcome {
    let mut rng = rng_from_seed(1010);
    let mut worst = 0.0f64;
    let mut ok = true;
    for k in 0..DOUBLING_SAMPLES {
        let n = 1 + k % 4;
        let bound = MEMBERSHIP_TOL * (2 * n) as f64;
        let r = GroupId::unitary(n, Field::C).sample_group(&mut rng, 1.0).realify().expect("complex");
        let q = GroupId::unitary(n, Field::H).sample_group(&mut rng, 1.0).complexify();
        let checks = [
            GroupId::unitary(2 * n, Field::R).membership_residual(&r),
            GroupId::sp(n, Field::R).membership_residual(&r),
            GroupId::unitary(2 * n, Field::C).membership_residual(&q),
            GroupId::sp(n, Field::C).membership_residual(&q),
        ];
        for c in checks {
            let c = c.unwrap_or(f64::INFINITY);
            worst = worst.max(c);
            ok &= c <= bound;
        }
    }
    outcome(ok, format!("{DOUBLING_SAMPLES} + {DOUBLING_SAMPLES} samples, worst membership {worst:.2e} (tol {MEMBERSHIP_TOL:.0e} n)"))
}

/// Independent realification straight from nalgebra: `[[Re, Im], [-Im, Re]]`.
fn realify_oracle(c: &DenseMatrix) -> DenseMatrix {
    let m = to_na::<Complex<f64>>(c).expect("complex");
    let n = m.nrows();
    from_na(&DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => z.im,
            (false, true) => -z.im,
        }
    }))
}

fn criterion_11() -> Outcome {
    let mut rng = rng_from_seed(1011);
    let mut worst = [0.0f64; 7];
    let mut ok = true;
    for _ in 0..IDENTITY_TRIALS {
        let c = random_matrix(Field::C, 4, 4, &mut rng, 1.0);
        let q = random_matrix(Field::H, 4, 4, &mut rng, 1.0);
        let norm = c.frobenius_norm().max(q.frobenius_norm());
        let bound = IDENTITY_FACTOR * f64::EPSILON * norm;
        let Ok(res) = identity_residuals(&c, &q) else {
            ok = false;
            continue;
        };
        let layout = c.realify().expect("complex").distance(&realify_oracle(&c));
        for (i, r) in res.iter().chain([&layout]).enumerate() {
            worst[i] = worst[i].max(r / norm);
            ok &= *r <= bound;
        }
    }
    let mut detail = format!("{IDENTITY_TRIALS} trials on 4x4, worst/norm");
    for w in worst {
        let _ = write!(detail, " {w:.1e}");
    }
    let _ = write!(detail, " (tol {IDENTITY_FACTOR} eps = {:.1e})", IDENTITY_FACTOR * f64::EPSILON);
    outcome(ok, detail)
}

fn criterion_12() -> Outcome {
    let mut rng = rng_from_seed(1012);
    let (mut memb, mut pal, mut rec) = (0.0f64, 0.0f64, 0.0f64);
    let mut ok = true;
    let mut check = |kind: IsoKind, g: &DenseMatrix, svd: kak::Result<StructuredSvd>, pairs: Vec<(usize, usize)>| {
        let Ok(s) = svd else {
            return false;
        };
        let n = kind.size() as f64;
        let m = [&s.u, &s.sigma, &s.w].iter().map(|f| kind.target_residual(f)).fold(0.0, f64::max);
        let p = pairs.iter().map(|&(i, j)| (s.values[i] * s.values[j] - 1.0).abs()).fold(0.0, f64::max);
        let r = s.reconstruction_residual(g) / (n * g.frobenius_norm());
        memb = memb.max(m / n);
        pal = pal.max(p);
        rec = rec.max(r);
        m <= STRUCTURED_TOL * n && p <= PALINDROME_TOL && r <= RECONSTRUCTION_TOL
    };
    for n in 1..=MAX_N {
        for _ in 0..5 {
            for kind in [IsoKind::RealPerplectic { n }, IsoKind::ComplexPerplectic { n }] {
                let h = kind.source_group().sample_group(&mut rng, 0.7);
                let g = structure_isomorphism(kind, &h, Direction::Forward).expect("source member");
                let svd = match kind {
                    IsoKind::RealPerplectic { .. } => perplectic_svd_real(&g),
                    _ => perplectic_svd_complex(&g),
                };
                ok &= check(kind, &g, svd, (0..n).map(|i| (i, n - 1 - i)).collect());
            }
            if n <= MAX_N / 2 {
                let kind = IsoKind::ConjugateSymplectic { n };
                let h = kind.source_group().sample_group(&mut rng, 0.7);
                let g = structure_isomorphism(kind, &h, Direction::Forward).expect("source member");
                ok &= check(kind, &g, conjugate_symplectic_svd(&g), (0..n).map(|i| (i, n + i)).collect());
            }
        }
    }
    outcome(
        ok,
        format!(
            "membership/n {memb:.2e} (tol {STRUCTURED_TOL:.0e}), reciprocal pairs {pal:.2e} (tol {PALINDROME_TOL:.0e}), recon {rec:.2e}"
        ),
    )
}

fn criterion_13() -> Outcome {
    let dir = std::env::temp_dir().join(format!("kak-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let run = |tag: &str, parallel: bool| -> (String, Vec<u8>, Vec<u8>) {
        let cfg = SweepConfig {
            sizes: (1..=5).collect(),
            trials: 12,
            seed: 2024,
            scale: 1.0,
            thresholds: Thresholds::default(),
            filter: None,
            decompose: true,
            parallel,
            report: Some(dir.join(format!("{tag}.txt"))),
            csv: Some(dir.join(format!("{tag}.csv"))),
        };
        let rep = sweep(&cfg).expect("sweep runs");
        rep.write_outputs().expect("outputs written");
        let read = |ext: &str| std::fs::read(dir.join(format!("{tag}.{ext}"))).expect("output exists");
        (rep.text(), read("txt"), read("csv"))
    };
    let a = run("a", false);
    let b = run("b", false);
    let c = run("c", true);
    let _ = std::fs::remove_dir_all(&dir);
    let ok = a == b && a == c && !a.1.is_empty();
    outcome(ok, format!("report {} bytes, csv {} bytes; repeat and parallel runs identical: {ok}", a.1.len(), a.2.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 13] = [
        ("catalogue", criterion_1),
        ("compose-verify", criterion_2),
        ("consistency", criterion_3),
        ("decomposition round trips", criterion_4),
        ("orthogonal-diagonal-orthogonal separation", criterion_5),
        ("takagi", criterion_6),
        ("williamson", criterion_7),
        ("nonsquare svd", criterion_8),
        ("folding", criterion_9),
        ("field doubling", criterion_10),
        ("structure identities", criterion_11),
        ("structured svds", criterion_12),
        ("sweep determinism", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {name:<42} {}  {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail.trim_end());
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
