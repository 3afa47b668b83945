use kak::decompose::{decompose, fold, is_decomposable, svd_factor, FoldSide};
use kak::groups::{random_matrix, rng_from_seed, GroupId};
use kak::harness::{format_matrix, parse_matrix, task_seed, theta_deviation};
use kak::numeric::{DenseMatrix, Field, Quaternion};
use kak::registry::{cells, spec, Params};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::R), Just(Field::C), Just(Field::H)]
}

fn cell_and_params() -> impl Strategy<Value = (u8, u8, Params)> {
    let all = cells();
    (0..all.len(), 1usize..=6, 0usize..4).prop_map(move |(i, n, v)| {
        let (fid, beta) = all[i];
        let variants = Params::variants(fid, n);
        (fid, beta, variants[v % variants.len()])
    })
}

fn finite() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |x| x.is_finite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn realify_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng_from_seed(seed);
        let a = random_matrix(Field::C, n, n, &mut rng, 1.0);
        let b = random_matrix(Field::C, n, n, &mut rng, 1.0);
        let lhs = (&a * &b).realify().unwrap();
        let rhs = &a.realify().unwrap() * &b.realify().unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-13 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
        prop_assert!(lhs.derealify().unwrap().distance(&(&a * &b)) == 0.0);
    }

    #[test]
    fn complexify_is_multiplicative(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let a = random_matrix(Field::H, n, n, &mut rng, 1.0);
        let b = random_matrix(Field::H, n, n, &mut rng, 1.0);
        let lhs = (&a * &b).complexify();
        let rhs = &a.complexify() * &b.complexify();
        prop_assert!(lhs.distance(&rhs) <= 1e-13 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
        prop_assert!(a.complexify().decomplexify().unwrap() == a);
    }

    #[test]
    fn quaternion_product_is_associative(v in prop::array::uniform12(-10.0f64..10.0)) {
        let p = Quaternion::new(v[0], v[1], v[2], v[3]);
        let q = Quaternion::new(v[4], v[5], v[6], v[7]);
        let r = Quaternion::new(v[8], v[9], v[10], v[11]);
        let d = (p * q) * r - p * (q * r);
        prop_assert!(d.abs() <= 1e-12 * (1.0 + p.abs() * q.abs() * r.abs()));
        prop_assert!(((p * q).abs() - p.abs() * q.abs()).abs() <= 1e-12 * (1.0 + p.abs() * q.abs()));
    }

    #[test]
    fn involutions_square_to_identity((fid, beta, params) in cell_and_params(), seed in any::<u64>()) {
        let s = spec(fid, beta, params).unwrap();
        let mut rng = rng_from_seed(seed);
        let x = s.ambient.sample_algebra(&mut rng, 1.0);
        for inv in [s.sigma(), s.tau()] {
            let back = inv.apply(&inv.apply(&x));
            prop_assert!(back.distance(&x) <= 1e-12 * (1.0 + x.frobenius_norm()), "{} {}", s.label(), inv);
        }
    }

    #[test]
    fn sampled_elements_fold_on_both_sides((fid, beta, params) in cell_and_params(), seed in any::<u64>()) {
        let s = spec(fid, beta, params).unwrap();
        let fe = s.sample_factored(&mut rng_from_seed(seed), 0.6).unwrap();
        let bound = 1e-9 * fe.g.frobenius_norm().powi(2);
        for side in [FoldSide::Left, FoldSide::Right] {
            let f = fold(&fe, side).unwrap();
            prop_assert!(f.residual <= bound, "{} {side:?}: {:e}", s.label(), f.residual);
        }
    }

    #[test]
    fn canonicalize_is_idempotent((fid, beta, params) in cell_and_params(), seed in any::<u64>()) {
        let s = spec(fid, beta, params).unwrap();
        let theta = s.sample_angles(&mut rng_from_seed(seed));
        let once = s.template.canonicalize(&theta);
        prop_assert_eq!(s.template.canonicalize(&once), once.clone());
        prop_assert_eq!(theta_deviation(&s, &theta, &once), 0.0);
    }

    #[test]
    fn middle_factor_at_zero_is_identity((fid, beta, params) in cell_and_params()) {
        let s = spec(fid, beta, params).unwrap();
        let a = s.template.middle_factor(&vec![0.0; s.angle_count()], s.field()).unwrap();
        prop_assert!(a.distance(&DenseMatrix::identity(s.field(), s.dim())) <= 1e-15);
    }

    #[test]
    fn matrix_text_round_trips_bitwise(f in field(), rows in 0usize..4, cols in 0usize..4, xs in prop::collection::vec(finite(), 64)) {
        let width = match f { Field::R => 1, Field::C => 2, Field::H => 4 };
        let m = DenseMatrix::from_fn(f, rows, cols, |i, j| {
            let k = (i * cols + j) * width;
            let mut q = [0.0; 4];
            q[..width].copy_from_slice(&xs[k..k + width]);
            Quaternion::new(q[0], q[1], q[2], q[3])
        });
        let back = parse_matrix(&format_matrix(&m).unwrap()).unwrap();
        prop_assert_eq!(back.field(), f);
        prop_assert_eq!((back.rows(), back.cols()), (rows, cols));
        for (a, b) in m.entries().iter().zip(back.entries()) {
            for (x, y) in [(a.w, b.w), (a.x, b.x), (a.y, b.y), (a.z, b.z)] {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn svd_round_trip_recovers_angles(f in field(), n in 1usize..6, seed in any::<u64>()) {
        let s = spec(7, f.beta(), Params::N { n }).unwrap();
        let fe = s.sample_factored(&mut rng_from_seed(seed), 1.0).unwrap();
        let d = svd_factor(&fe.g).unwrap();
        prop_assert!(theta_deviation(&s, &d.theta, &fe.theta) <= 1e-8);
        prop_assert!(d.reconstruction_residual() <= 1e-9 * n as f64 * fe.g.frobenius_norm());
    }

    #[test]
    fn decompositions_reconstruct((fid, beta, params) in cell_and_params(), seed in any::<u64>()) {
        prop_assume!(is_decomposable(fid, beta));
        let s = spec(fid, beta, params).unwrap();
        let fe = s.sample_factored(&mut rng_from_seed(seed), 1.0).unwrap();
        let d = decompose(&s, &fe.g).unwrap();
        prop_assert!(d.reconstruction_residual() <= 1e-9 * s.dim() as f64 * fe.g.frobenius_norm().max(1.0), "{}", s.label());
        prop_assert!(theta_deviation(&s, &d.theta, &fe.theta) <= 1e-8, "{}", s.label());
    }

    #[test]
    fn group_samples_are_members(f in field(), n in 1usize..6, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let u = GroupId::unitary(n, f).sample_group(&mut rng, 1.0);
        prop_assert!(GroupId::unitary(n, f).membership_residual(&u).unwrap() <= 1e-12 * n as f64);
        let w = GroupId::upq(n, 1, f).sample_group(&mut rng, 0.5);
        prop_assert!(GroupId::upq(n, 1, f).membership_residual(&w).unwrap() <= 1e-10 * w.frobenius_norm().powi(2));
    }

    #[test]
    fn task_seeds_depend_on_every_part(seed in any::<u64>(), parts in prop::collection::vec(any::<u64>(), 1..6), k in 0usize..6, flip in 1u64..) {
        let k = k % parts.len();
        let mut other = parts.clone();
        other[k] ^= flip;
        prop_assert_eq!(task_seed(seed, &parts), task_seed(seed, &parts));
        prop_assert_ne!(task_seed(seed, &parts), task_seed(seed, &other));
    }
}
