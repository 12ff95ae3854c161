mod common;

use common::{hermitian_with_spectrum, random_matrix, random_cvec, rel_diff};
use proptest::prelude::*;
use rfom2::experiment::{run_experiment, ExperimentConfig};
use rfom2::problems::{read_matrix_market, write_matrix_market};
use rfom2::rfom::AugmentedQuantities;
use rfom2::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

/// `(n, j)` with `1 <= j <= n`.
fn sizes(lo: usize, hi: usize) -> impl Strategy<Value = (usize, usize)> {
    (lo..hi).prop_flat_map(|n| (Just(n), 1..=n))
}

/// Hermitian positive definite problem with a recycle basis of `k`
/// random vectors.
fn augmented_problem(n: usize, j: usize, k: usize, seed: u64) -> (CMat, ArnoldiDecomposition, CMat) {
    let a = hermitian_with_spectrum(n, 1.0, 5.0, seed);
    let b = random_cvec(n, seed.wrapping_add(1));
    let dec = arnoldi(&a, &b, j, true).unwrap();
    (a, dec, random_matrix(n, k, seed.wrapping_add(2)))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn arnoldi_relation_holds((n, j) in sizes(4, 40), seed in any::<u64>()) {
        let a = random_matrix(n, n, seed);
        let b = random_cvec(n, seed ^ 1);
        let dec = arnoldi(&a, &b, j, true).unwrap();
        let m = dec.steps();
        let v = dec.basis_extended();
        let scale = a.norm();
        if dec.breakdown() {
            let vj = dec.basis().clone_owned();
            prop_assert!((&a * &vj - &vj * dec.hessenberg()).norm() <= 1e-10 * scale);
        } else {
            prop_assert!((&a * dec.basis() - v * dec.hbar()).norm() <= 1e-10 * scale);
        }
        // after a breakdown the extra column is zero
        let basis = if dec.breakdown() || j == n { dec.basis().clone_owned() } else { v.clone() };
        let gram = basis.adjoint() * &basis;
        prop_assert!((gram - CMat::identity(basis.ncols(), basis.ncols())).norm() <= 1e-10 * (m as f64));
    }

    #[test]
    fn augmented_relation_holds(
        (n, j) in sizes(10, 40),
        k in 1usize..5,
        seed in any::<u64>(),
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
    ) {
        prop_assume!(j + k <= n);
        let (a, dec, u) = augmented_problem(n, j, k, seed);
        let rec = RecycleSubspace::from_basis(&a, u, DPolicy::UnitColumns).unwrap();
        let aq = AugmentedQuantities::new(&dec, &rec).unwrap();
        let sigma = c64::new(re, im);
        let scale = (a.norm() + sigma.norm()) * (aq.vhat().norm() + 1.0);
        prop_assert!(aq.relation_residual(&a, sigma) <= 1e-11 * scale);
    }

    #[test]
    fn v1_matches_v2((n, j) in sizes(12, 40), k in 1usize..5, seed in any::<u64>()) {
        prop_assume!(j + k <= n);
        let (a, dec, u) = augmented_problem(n, j, k, seed);
        let rec = RecycleSubspace::from_basis(&a, u, DPolicy::Identity).unwrap();
        let fun = FunctionSpec::by_name("inverse").unwrap();
        let rule = trapezoid_contour(auto_contour(&dec, &rec, &fun, 0.1).unwrap(), 64).unwrap();
        let x1 = rfom_v1(&dec, &rec, &fun, &rule).unwrap();
        let x2 = rfom_v2(&dec, &rec, &fun, &rule).unwrap();
        prop_assert!(rel_diff(&x1, &x2) <= 1e-8);
    }

    #[test]
    fn d_scaling_leaves_v2_unchanged(
        (n, j) in sizes(12, 40),
        k in 1usize..5,
        seed in any::<u64>(),
        scales in proptest::collection::vec(1e-3f64..1e3, 5),
    ) {
        prop_assume!(j + k <= n);
        let (a, dec, mut u) = augmented_problem(n, j, k, seed);
        for (mut col, s) in u.column_iter_mut().zip(&scales) {
            col *= c64::new(*s, 0.0);
        }
        let fun = FunctionSpec::by_name("invsqrt").unwrap();
        let rule = stieltjes_invsqrt(40).unwrap();
        let plain = RecycleSubspace::from_basis(&a, u.clone(), DPolicy::Identity).unwrap();
        let unit = RecycleSubspace::from_basis(&a, u, DPolicy::UnitColumns).unwrap();
        let x = rfom_v2(&dec, &plain, &fun, &rule).unwrap();
        let y = rfom_v2(&dec, &unit, &fun, &rule).unwrap();
        prop_assert!(rel_diff(&x, &y) <= 1e-8);
    }

    #[test]
    fn contour_weights_sum_to_zero(
        n in 2usize..400,
        re in -10.0f64..10.0,
        im in -10.0f64..10.0,
        r in 1e-2f64..1e2,
    ) {
        let rule = trapezoid_contour(CircleContour::new(c64::new(re, im), r).unwrap(), n).unwrap();
        let s = rule.sum(|_| c64::new(1.0, 0.0));
        prop_assert!(s.norm() <= 1e-13 * r);
        // Cauchy's formula for the constant function at the center
        let c = rule.sum(|z| 1.0 / (z - c64::new(re, im)));
        prop_assert!((c - 1.0).norm() <= 1e-13);
    }

    #[test]
    fn stieltjes_nodes_are_negative(n in 1usize..200) {
        let rule = stieltjes_invsqrt(n).unwrap();
        prop_assert_eq!(rule.len(), n);
        for z in rule.nodes() {
            prop_assert!(z.re < 0.0 && z.im == 0.0);
        }
    }

    #[test]
    fn matrix_market_round_trip(
        rows in 1usize..20,
        cols in 1usize..20,
        entries in proptest::collection::vec((0usize..20, 0usize..20, -1e6f64..1e6, -1e6f64..1e6), 0..60),
        real in any::<bool>(),
    ) {
        let trip: Vec<_> = entries
            .into_iter()
            .map(|(r, c, x, y)| (r % rows, c % cols, c64::new(x, if real { 0.0 } else { y })))
            .collect();
        let a = SparseMatrix::from_triplets(rows, cols, trip).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        let back = read_matrix_market(buf.as_slice()).unwrap();
        prop_assert_eq!((back.nrows(), back.ncols()), (rows, cols));
        prop_assert_eq!(back.triplets().collect::<Vec<_>>(), a.triplets().collect::<Vec<_>>());
    }

    #[test]
    fn config_toml_round_trip(
        j in 1usize..200,
        k in 0usize..50,
        n_quad in 1usize..5000,
        epsilon in 0.0f64..1.0,
        seed in 0..=i64::MAX as u64,
        function in prop::sample::select(vec!["inverse", "invsqrt", "log", "exp", "sqrt"]),
        engines in prop::sample::subsequence(Engine::ALL.to_vec(), 1..=5),
    ) {
        let cfg = ExperimentConfig {
            j, k, n_quad, epsilon, seed, engines,
            function: function.to_string(),
            ..ExperimentConfig::default()
        };
        let text = cfg.to_toml_string().unwrap();
        prop_assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn reports_are_deterministic(seed in 0..=i64::MAX as u64, k in 0usize..6) {
        let text = format!(
            "problem = \"gauge_laplacian\"\nmesh = 6\nmass = 0.3\nfunction = \"invsqrt\"\n\
             quadrature = \"stieltjes\"\nj = 12\nk = {k}\nn_quad = 20\nsequence_length = 3\n\
             epsilon = 1e-3\nseed = {seed}\ntrack_angle = true\n"
        );
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        let strip = |cfg: &ExperimentConfig| {
            let mut rep = run_experiment(cfg).unwrap();
            for r in &mut rep.rows {
                r.wall_ms = 0.0;
            }
            rep.to_csv()
        };
        prop_assert_eq!(strip(&cfg), strip(&cfg));
    }
}

#[test]
fn seeds_beyond_toml_integers_are_rejected() {
    let cfg = ExperimentConfig { seed: u64::MAX, ..ExperimentConfig::default() };
    assert!(cfg.validate().is_err());
    assert!(cfg.to_toml_string().is_err());
}
