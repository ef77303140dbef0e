mod common;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Adj;
use polygas::gas::{
    all_polymers, independence_polynomial, partition_function, partition_function_with, pi_volume,
    pinned_derivative, DEFAULT_ENUMERATION_CAP,
};
use polygas::ursell::{
    connected_signed_sum, css_signed_sum, mayer_log_truncated, pi_truncated, ursell_coefficient,
};
use polygas::{ClusterGraph, Criterion, CriterionKind, Error};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn partition_function_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.0..1.0);
        let adj = common::random_adj(&mut rng, n, p);
        let g = common::graph_of(&adj);
        let lambda: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.8)).collect();
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..1.5)).collect();
        let got = partition_function(&g, &lambda, &z).unwrap();
        let want = common::xi(&adj, &lambda, &z);
        assert!(close(got, want, 1e-12), "{got} vs {want}");
    }
}

#[test]
fn exact_partition_function_over_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let adj = common::random_adj(&mut rng, n, 0.4);
        let g = common::graph_of(&adj);
        let z: Vec<BigRational> = (0..n)
            .map(|_| BigRational::new(rng.gen_range(-9..10).into(), rng.gen_range(1..12).into()))
            .collect();
        let all = all_polymers(&g);
        let got = partition_function_with(&g, &all, &z, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(got, common::xi(&adj, &all, &z));
    }
}

#[test]
fn independence_polynomial_counts_independent_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(1..=9);
        let adj = common::random_adj(&mut rng, n, 0.5);
        let g = common::graph_of(&adj);
        let all = all_polymers(&g);
        let poly = independence_polynomial(&g, &all).unwrap();
        let mut counts = vec![0u64; n + 1];
        for mask in 0u32..1 << n {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if members
                .iter()
                .all(|&a| members.iter().all(|&b| a == b || !adj.incompatible(a, b)))
            {
                counts[members.len()] += 1;
            }
        }
        while counts.len() > 1 && counts.last() == Some(&0) {
            counts.pop();
        }
        assert_eq!(poly.coefficients, counts);
    }
}

#[test]
fn ursell_matches_union_find_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..300 {
        let n = rng.gen_range(1..=5);
        let adj = common::random_adj(&mut rng, n, 0.5);
        let g = common::graph_of(&adj);
        let len = rng.gen_range(1..=6);
        let seq: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        assert_eq!(
            ursell_coefficient(&g, &seq).unwrap().0,
            common::ursell(&adj, &seq),
            "{seq:?}"
        );
    }
}

#[test]
fn signed_sums_agree_with_oracle_on_all_small_graphs() {
    for n in 1..=5 {
        for edges in common::all_edge_sets(n) {
            let cg = ClusterGraph::new(n, &edges).unwrap();
            let want = common::signed_css(n, &edges);
            if cg.is_connected() {
                assert_eq!(css_signed_sum(&cg).unwrap(), want, "{edges:?}");
            } else {
                assert_eq!(want, 0);
                assert!(matches!(css_signed_sum(&cg), Err(Error::Disconnected)));
            }
            assert_eq!(connected_signed_sum(&cg).unwrap(), want, "{edges:?}");
        }
    }
}

#[test]
fn series_match_ordered_tuple_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let adj = common::random_adj(&mut rng, n, 0.5);
        let g = common::graph_of(&adj);
        let rho: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.1)).collect();
        let g0 = rng.gen_range(0..n);
        for n_max in 0..=4 {
            let got = pi_truncated(&g, g0, &rho, n_max).unwrap();
            let want = common::pi_ordered(&adj, g0, &rho, n_max);
            assert!(close(got, want, 1e-12), "Π: {got} vs {want}");
        }
        let all = all_polymers(&g);
        for n_max in 1..=5 {
            let got = mayer_log_truncated(&g, &all, &rho, n_max).unwrap();
            let want = common::mayer_ordered(&adj, &all, &rho, n_max);
            assert!(close(got, want, 1e-12), "log Ξ: {got} vs {want}");
        }
    }
}

#[test]
fn pinned_quantities_match_exact_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..60 {
        let n = rng.gen_range(1..=7);
        let adj = common::random_adj(&mut rng, n, 0.4);
        let g = common::graph_of(&adj);
        let all = all_polymers(&g);
        let rho: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.08)).collect();
        for g0 in 0..n {
            let exact = common::pi_volume_exact(&adj, g0, &rho).expect("small activities");
            let got = pi_volume(&g, &all, g0, &rho).unwrap();
            assert!(close(got, common::to_f64(&exact), 1e-12));
            let neg: Vec<f64> = rho.iter().map(|r| -r).collect();
            let d = pinned_derivative(&g, &all, g0, &neg).unwrap();
            assert!(close(d, got, 1e-12));
        }
    }
}

#[test]
fn pinned_series_converges_to_exact_value() {
    let adj = Adj::new(3, &[(0, 1), (1, 2)]);
    let g = common::graph_of(&adj);
    let rho = [0.05, 0.04, 0.03];
    let exact = common::to_f64(&common::pi_volume_exact(&adj, 1, &rho).unwrap());
    let series = pi_truncated(&g, 1, &rho, 10).unwrap();
    assert!((series - exact).abs() < 1e-10, "{series} vs {exact}");
}

#[test]
fn fp_phi_matches_neighborhood_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let adj = common::random_adj(&mut rng, n, 0.5);
        let g = common::graph_of(&adj);
        let c = Criterion::new(CriterionKind::FernandezProcacci, &g).unwrap();
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let g0 = rng.gen_range(0..n);
        let got = c.phi(g0, &mu).unwrap();
        let want = common::phi_fp(&adj, g0, &mu);
        assert!(close(got, want, 1e-13));
    }
}
