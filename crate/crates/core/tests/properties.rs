use proptest::prelude::*;

use polygas::criteria::{dobrushin_exponent_form, kp_exponent_form};
use polygas::gas::{
    all_polymers, configuration_weight, independence_polynomial, partition_function, pi_volume,
};
use polygas::ursell::{connected_signed_sum, css_signed_sum};
use polygas::{ClusterGraph, Criterion, CriterionKind, FixedPointConfig, InteractionGraph};

/// A graph on `1..=max_n` polymers given as `(n, edges)`.
fn graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |keep| {
            let edges = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &b)| b)
                .map(|(&e, _)| e)
                .collect();
            (n, edges)
        })
    })
}

fn with_weights(
    max_n: usize,
    lo: f64,
    hi: f64,
) -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<f64>)> {
    graph(max_n).prop_flat_map(move |(n, edges)| {
        proptest::collection::vec(lo..hi, n).prop_map(move |w| (n, edges.clone(), w))
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn xi_factorizes_over_disjoint_unions(
        (n1, e1, z1) in with_weights(5, -0.3, 1.0),
        (n2, e2, z2) in with_weights(5, -0.3, 1.0),
    ) {
        let mut edges = e1.clone();
        edges.extend(e2.iter().map(|&(a, b)| (a + n1, b + n1)));
        let joined = InteractionGraph::new(n1 + n2, &edges).unwrap();
        let mut z = z1.clone();
        z.extend(&z2);
        let g1 = InteractionGraph::new(n1, &e1).unwrap();
        let g2 = InteractionGraph::new(n2, &e2).unwrap();
        let whole = partition_function(&joined, &all_polymers(&joined), &z).unwrap();
        let parts = partition_function(&g1, &all_polymers(&g1), &z1).unwrap()
            * partition_function(&g2, &all_polymers(&g2), &z2).unwrap();
        prop_assert!(close(whole, parts, 1e-12));
    }

    #[test]
    fn independence_polynomial_evaluates_to_xi((n, edges, _w) in with_weights(9, 0.0, 1.0), x in 0.0f64..2.0) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let all = all_polymers(&g);
        let poly = independence_polynomial(&g, &all).unwrap();
        let xi = partition_function(&g, &all, &vec![x; n]).unwrap();
        prop_assert!(close(poly.eval(x), xi, 1e-12));
    }

    #[test]
    fn phi_is_ordered_across_kinds((n, edges, mu) in with_weights(8, 0.0, 2.0), g0 in 0usize..8) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let g0 = g0 % n;
        let vals: Vec<f64> = [
            CriterionKind::FernandezProcacci,
            CriterionKind::ImprovedDobrushin,
            CriterionKind::Dobrushin,
            CriterionKind::KoteckyPreiss,
        ]
        .iter()
        .map(|&k| Criterion::new(k, &g).unwrap().phi(g0, &mu).unwrap())
        .collect();
        for w in vals.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-12), "{vals:?}");
        }
    }

    #[test]
    fn stronger_conditions_imply_weaker((n, edges, mu) in with_weights(7, 0.0, 0.5), scale in 0.0f64..1.0) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let kp = Criterion::new(CriterionKind::KoteckyPreiss, &g).unwrap();
        // Activities that make Kotecký–Preiss hold with some slack.
        let rho: Vec<f64> = (0..n).map(|i| scale * mu[i] / kp.phi(i, &mu).unwrap() * 0.999).collect();
        let mut previous = true;
        for kind in [
            CriterionKind::KoteckyPreiss,
            CriterionKind::Dobrushin,
            CriterionKind::ImprovedDobrushin,
            CriterionKind::FernandezProcacci,
        ] {
            let holds = Criterion::new(kind, &g).unwrap().condition_holds(&rho, &mu).unwrap();
            prop_assert!(!previous || holds, "{kind} fails after a stronger condition held");
            previous = holds;
        }
    }

    #[test]
    fn t_map_is_monotone(
        (n, edges, rho) in with_weights(7, 0.0, 0.3),
        base in proptest::collection::vec(0.0f64..1.0, 7),
        bump in proptest::collection::vec(0.0f64..0.5, 7),
        kind_idx in 0usize..4,
    ) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let c = Criterion::new(CriterionKind::ALL[kind_idx], &g).unwrap();
        let lo: Vec<f64> = base[..n].to_vec();
        let hi: Vec<f64> = lo.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let t_lo = c.t_map(&rho, &lo).unwrap();
        let t_hi = c.t_map(&rho, &hi).unwrap();
        prop_assert!(t_lo.iter().zip(&t_hi).all(|(a, b)| a <= b));
    }

    #[test]
    fn signed_sums_agree((n, edges) in graph(7)) {
        let cg = ClusterGraph::new(n, &edges).unwrap();
        prop_assume!(cg.is_connected());
        prop_assert_eq!(css_signed_sum(&cg).unwrap(), connected_signed_sum(&cg).unwrap());
    }

    #[test]
    fn graph_text_and_json_round_trip((n, edges) in graph(12)) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let from_text = InteractionGraph::from_text(&g.to_text()).unwrap();
        let from_json = InteractionGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(from_text.edges(), g.edges());
        prop_assert_eq!(from_json.edges(), g.edges());
        prop_assert_eq!(from_json.n_polymers(), n);
    }

    #[test]
    fn bound_chain_is_sandwiched((n, edges, w) in with_weights(6, 0.2, 1.0), frac in 0.05f64..0.5) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let c = Criterion::new(CriterionKind::FernandezProcacci, &g).unwrap();
        let config = FixedPointConfig::default();
        // Degree at most 5 keeps 1/(e·6) safely inside every region.
        let rho: Vec<f64> = w.iter().map(|x| x * frac / (std::f64::consts::E * 6.0)).collect();
        let star = c.fixed_point(&rho, &config).unwrap();
        prop_assert!(star.converged);
        let bigger: Vec<f64> = rho.iter().map(|r| r * 1.01).collect();
        let cert = c.fixed_point(&bigger, &config).unwrap();
        let chain = c.bound_chain(&rho, &cert.rho_star, 20).unwrap();
        let mut prev = cert.rho_star.clone();
        for cur in &chain {
            prop_assert!(cur.iter().zip(&prev).all(|(a, b)| a <= b));
            prop_assert!(cur.iter().zip(&star.rho_star).all(|(a, s)| *a >= s - 1e-9));
            prev = cur.clone();
        }
        let all = all_polymers(&g);
        for g0 in 0..n {
            let pi = pi_volume(&g, &all, g0, &rho).unwrap();
            prop_assert!(rho[g0] * pi <= star.rho_star[g0] + 1e-9, "{} > {}", rho[g0] * pi, star.rho_star[g0]);
        }
    }

    #[test]
    fn exponent_forms_match_conditions((n, edges, rho) in with_weights(6, 0.001, 0.3), a in proptest::collection::vec(0.0f64..1.5, 6)) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let a = &a[..n];
        let margin_kp = (0..n)
            .map(|g0| {
                let s: f64 = g.closed_neighborhood(g0).unwrap().iter().map(|&x| rho[x] * a[x].exp()).sum();
                (s - a[g0]).abs()
            })
            .fold(f64::INFINITY, f64::min);
        prop_assume!(margin_kp > 1e-9);
        let mu: Vec<f64> = rho.iter().zip(a).map(|(r, x)| r * x.exp()).collect();
        let kp = Criterion::new(CriterionKind::KoteckyPreiss, &g).unwrap();
        prop_assert_eq!(kp_exponent_form(&g, &rho, a).unwrap(), kp.condition_holds(&rho, &mu).unwrap());

        let mu_dob: Vec<f64> = a.iter().map(|x| x.exp_m1()).collect();
        let dob = Criterion::new(CriterionKind::Dobrushin, &g).unwrap();
        let t = dob.t_map(&rho, &mu_dob).unwrap();
        prop_assume!(t.iter().zip(&mu_dob).all(|(x, m)| (x - m).abs() > 1e-9 * (1.0 + m)));
        prop_assert_eq!(dobrushin_exponent_form(&g, &rho, a).unwrap(), dob.condition_holds(&rho, &mu_dob).unwrap());
    }

    #[test]
    fn configuration_weights_sum_to_one((n, edges, z) in with_weights(8, 0.0, 2.0)) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let all = all_polymers(&g);
        let mut total = 0.0;
        for mask in 0u32..1 << n {
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            total += configuration_weight(&g, &all, &z, &subset).unwrap();
        }
        prop_assert!(close(total, 1.0, 1e-12));
    }

    #[test]
    fn pinned_series_grows_with_the_volume((n, edges, rho) in with_weights(8, 0.0, 0.05), drop in 0usize..8) {
        let g = InteractionGraph::new(n, &edges).unwrap();
        let all = all_polymers(&g);
        let g0 = 0;
        let smaller: Vec<usize> = all.iter().copied().filter(|&p| p == g0 || p != drop % n).collect();
        let small = pi_volume(&g, &smaller, g0, &rho).unwrap();
        let large = pi_volume(&g, &all, g0, &rho).unwrap();
        prop_assert!(small <= large * (1.0 + 1e-12), "{small} > {large}");
    }
}
