mod common;

use common::*;
use fixmetric::cli::spacefile::{parse_space_file, FiniteGspaceFile, SpaceFile};
use fixmetric::comparison::ComparisonFunction;
use fixmetric::contraction::{
    check_reduction, functional_a, functional_b, functional_m, functional_p, functional_q, FiniteMap,
};
use fixmetric::gmetric::{
    check_gmetric, derive_metrics, g_cauchy_prefix, g_converges_prefix, random_gmetric, GMetric, TernaryTable,
};
use fixmetric::metric::{cauchy_prefix, check_almost_metric, check_metric, converges_prefix, diam, BinaryTable};
use fixmetric::picard::{iterate, rate_check, StopReason};
use proptest::prelude::*;

fn arb_gmetric() -> impl Strategy<Value = TernaryTable> {
    (2usize..=6, any::<u64>()).prop_map(|(n, seed)| random_gmetric(n, seed).unwrap())
}

fn arb_map(n: usize) -> impl Strategy<Value = FiniteMap> {
    prop::collection::vec(0..n, n).prop_map(|v| FiniteMap::new(v).unwrap())
}

/// An arbitrary symmetric ternary table with small integer values, so axiom
/// failures of every kind show up.
fn arb_ternary() -> impl Strategy<Value = TernaryTable> {
    (2usize..=4).prop_flat_map(|n| {
        let count = fixmetric::gmetric::canonical_triples(n).count();
        prop::collection::vec(0u8..=4, count).prop_map(move |vals| {
            let mut it = vals.into_iter();
            TernaryTable::from_canonical(n, |_, _, _| it.next().unwrap() as f64).unwrap()
        })
    })
}

fn arb_binary() -> impl Strategy<Value = BinaryTable> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(0u8..=4, n * (n - 1) / 2).prop_map(move |vals| {
            let mut it = vals.into_iter();
            let mut values = vec![0.0; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().unwrap() as f64;
                    values[i * n + j] = v;
                    values[j * n + i] = v;
                }
            }
            BinaryTable::new(n, values).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn gmetric_checker_agrees_with_oracle(t in arb_ternary()) {
        prop_assert_eq!(check_gmetric(&t, TOL).is_empty(), oracle_is_gmetric(&t, TOL));
    }

    #[test]
    fn metric_checker_agrees_with_oracle(d in arb_binary()) {
        prop_assert_eq!(check_metric(&d, TOL).is_empty(), oracle_is_metric(&d, TOL));
    }

    #[test]
    fn generator_always_yields_gmetrics(t in arb_gmetric()) {
        prop_assert!(oracle_is_gmetric(&t, TOL));
    }

    #[test]
    fn functionals_match_oracle((t, map) in arb_gmetric().prop_flat_map(|t| { let n = t.n(); (Just(t), arb_map(n)) })) {
        let g = GMetric::new(t.clone(), TOL).unwrap();
        let d = oracle_d(&t);
        let image = map.image();
        for x in 0..t.n() {
            for y in 0..t.n() {
                prop_assert_eq!(functional_p(g.d(), &map, x, y), oracle_p(&d, image, x, y));
                prop_assert_eq!(functional_q(g.d(), &map, x, y), oracle_q(&d, image, x, y));
                for z in 0..t.n() {
                    prop_assert_eq!(functional_m(&g, &map, x, y, z), oracle_m(&t, image, x, y, z));
                }
            }
        }
    }

    #[test]
    fn trace_invariants((t, map, x0) in arb_gmetric().prop_flat_map(|t| { let n = t.n(); (Just(t), arb_map(n), 0..n) })) {
        let g = GMetric::new(t, TOL).unwrap();
        let tr = iterate(g.d(), &map, x0, 0.0, 1000).unwrap();
        prop_assert_eq!(tr.iterates[0], x0);
        for (k, w) in tr.iterates.windows(2).enumerate() {
            prop_assert_eq!(w[1], map.image()[w[0]]);
            prop_assert_eq!(tr.rho[k], g.d().get(w[0], w[1]));
        }
        let len = tr.iterates.len();
        if tr.stop_reason == StopReason::FixedPointHit {
            prop_assert_eq!(tr.iterates[len - 1], tr.iterates[len - 2]);
        } else {
            prop_assert!(tr.cycle.is_some());
        }
    }

    #[test]
    fn passing_rate_gives_geometric_steps(k in 2.5f64..10.0, x0 in 0.1f64..10.0, gamma in 0.0f64..0.5) {
        let map = move |t: f64| t / k;
        let tr = iterate(&fixmetric::metric::RealLine, &map, x0, 1e-12, 200).unwrap();
        let checks = rate_check(&tr, gamma, 0.0).unwrap();
        if checks.iter().all(|c| c.pass) {
            let ratio = gamma / (1.0 - gamma);
            for (n, &r) in tr.rho.iter().enumerate() {
                prop_assert!(r <= ratio.powi(n as i32) * tr.rho[0] * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn envelope_bounds_decrease(alpha in 0.0f64..1.0, beta in 0.0f64..100.0) {
        let phi = ComparisonFunction::Linear(alpha);
        let mut prev = beta;
        for n in 1..50 {
            let next = phi.iterate(beta, n);
            prop_assert!(next <= prev);
            prev = next;
        }
    }

    #[test]
    fn prefix_convergence_transfers_with_factor_two(
        (t, seq, x, eps) in arb_gmetric().prop_flat_map(|t| {
            let n = t.n();
            (Just(t), prop::collection::vec(0..n, 1..8), 0..n, 0.5f64..2.5)
        })
    ) {
        let m = derive_metrics(&t, TOL).unwrap();
        let w = seq.len();
        if g_converges_prefix(&t, &seq, x, eps, w).unwrap() {
            prop_assert!(converges_prefix(&m.c, &seq, x, eps, w).unwrap());
            prop_assert!(converges_prefix(&m.d, &seq, x, 2.0 * eps, w).unwrap());
        }
        if converges_prefix(&m.d, &seq, x, eps, w).unwrap() {
            prop_assert!(g_converges_prefix(&t, &seq, x, 2.0 * eps, w).unwrap());
        }
        if g_cauchy_prefix(&t, &seq, eps, w).unwrap() {
            prop_assert!(cauchy_prefix(&m.d, &seq, eps, w).unwrap());
        }
        if cauchy_prefix(&m.d, &seq, eps, w).unwrap() {
            prop_assert!(g_cauchy_prefix(&t, &seq, 2.0 * eps, w).unwrap());
        }
    }

    #[test]
    fn space_file_round_trip((t, map) in arb_gmetric().prop_flat_map(|t| { let n = t.n(); (Just(t), prop::option::of(arb_map(n))) })) {
        let mut file = FiniteGspaceFile::from_table(&t);
        file.map = map.map(|m| m.image().to_vec());
        let text = SpaceFile::FiniteGspace(file).to_json();
        let parsed = parse_space_file(&text).unwrap();
        prop_assert_eq!(parse_space_file(&parsed.to_json()).unwrap(), parsed.clone());
        let SpaceFile::FiniteGspace(g) = parsed else { unreachable!() };
        prop_assert_eq!(g.table(), t);
    }

    #[test]
    fn a_below_b_and_fixed_point_identities(
        (t, map) in arb_gmetric().prop_flat_map(|t| { let n = t.n(); (Just(t), arb_map(n)) })
    ) {
        let g = GMetric::new(t, TOL).unwrap();
        let d = g.d();
        let fixed: Vec<usize> = (0..g.n()).filter(|&x| map.image()[x] == x).collect();
        for x in 0..g.n() {
            for y in 0..g.n() {
                prop_assert!(functional_a(d, &map, x, y) <= functional_b(d, &map, x, y));
            }
        }
        for &r in &fixed {
            for &s in &fixed {
                prop_assert_eq!(functional_b(d, &map, r, s), d.get(r, s));
                prop_assert_eq!(functional_p(d, &map, r, s), 2.0 * d.get(r, s));
                prop_assert_eq!(functional_q(d, &map, r, s), d.get(r, s));
            }
        }
    }

    #[test]
    fn reduction_holds_on_five_point_spaces(seed in any::<u64>(), image in prop::collection::vec(0usize..5, 5)) {
        let g = GMetric::new(random_gmetric(5, seed).unwrap(), TOL).unwrap();
        let map = FiniteMap::new(image).unwrap();
        prop_assert!(check_reduction(&g, &map, TOL).unwrap().is_empty());
    }

    #[test]
    fn diam_is_monotone_and_metrics_are_almost_metrics(
        d in arb_binary(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6),
    ) {
        let n = d.n();
        let subset: Vec<usize> = picks.iter().map(|i| i.index(n)).collect();
        for k in 2..=subset.len() {
            prop_assert!(diam(&d, &subset[..k - 1]).unwrap() <= diam(&d, &subset[..k]).unwrap());
        }
        if check_metric(&d, TOL).is_empty() {
            prop_assert!(check_almost_metric(&d, TOL).is_empty());
        }
    }
}
