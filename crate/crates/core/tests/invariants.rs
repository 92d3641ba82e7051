//! Property tests over randomly generated models and graphs. Each case is
//! driven by a seed so failures shrink to a reproducible instance.

use std::collections::BTreeMap;

use hwm_core::closures::{hwm_hadamard, hwm_sum, normalize_closed_graph};
use hwm_core::encodings::{
    circular_trace_hwm, encode_circular, encode_rooted_circular, encode_string,
    encode_string_bare, encode_tree, trace_of_product, Tree,
};
use hwm_core::engine::{eval, ContractionOrder, Engine, EvalConfig, Hwm};
use hwm_core::hypergraph::{disjoint_union, validate_hypergraph, Hypergraph, RankedAlphabet};
use hwm_core::io::{emit_graph, emit_model, parse_graph, parse_model};
use hwm_core::numeric::{rel_diff, C64, ONE};
use hwm_core::random::{self, Rng64};
use hwm_core::tensor::{product_fold, BasisLabel, ProductAlgebra};
use hwm_core::tiling::{are_isomorphic, find_tilings, quotient_hypergraph, tiling_hwm};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn small_instance(rng: &mut Rng64, max_dim: usize) -> (Hwm, Hypergraph) {
    let symbols = rng.random_range(1..=2);
    let sigma = random::alphabet(rng, symbols, 3);
    let d = rng.random_range(1..=max_dim);
    let complex = rng.random_bool(0.5);
    let alg = random::dense_algebra(rng, d, complex);
    let m = random::hwm(rng, &sigma, alg, 0.7, complex);
    let n = rng.random_range(1..=4);
    (m, random::hypergraph(rng, &sigma, n, 3))
}

fn value(m: &Hwm, g: &Hypergraph, engine: Engine) -> C64 {
    eval(m, g, engine, &EvalConfig::default()).unwrap().value
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    rel_diff(a, b) <= tol
}

fn matrices(rng: &mut Rng64, d: usize) -> BTreeMap<String, DMatrix<C64>> {
    ["a", "b"]
        .iter()
        .map(|s| (s.to_string(), DMatrix::from_fn(d, d, |_, _| random::scalar(rng, true))))
        .collect()
}

fn random_word(rng: &mut Rng64, len: usize) -> Vec<String> {
    (0..len).map(|_| if rng.random_bool(0.5) { "a" } else { "b" }.to_string()).collect()
}

fn random_tree(rng: &mut Rng64, depth: usize) -> Tree {
    if depth == 0 || rng.random_bool(0.4) {
        return Tree::leaf("a");
    }
    if rng.random_bool(0.5) {
        Tree::node("g", vec![random_tree(rng, depth - 1)])
    } else {
        Tree::node("f", vec![random_tree(rng, depth - 1), random_tree(rng, depth - 1)])
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ports_partitioned_by_hyperedges(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sigma = random::alphabet(&mut rng, 3, 4);
        let n = rng.random_range(1..=8);
        let g = random::hypergraph(&mut rng, &sigma, n, 4);
        let in_edges: usize = g.hyperedges().iter().map(Vec::len).sum();
        let by_vertex: usize = (0..g.vertex_count()).map(|v| g.arity_at(v)).sum();
        prop_assert_eq!(in_edges, by_vertex);
        prop_assert_eq!(in_edges, g.port_count());
    }

    #[test]
    fn components_ignore_ids_and_edge_order(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sigma = random::alphabet(&mut rng, 2, 3);
        let n = rng.random_range(1..=8);
        let g = random::hypergraph(&mut rng, &sigma, n, 2);
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.shuffle(&mut rng);
        let h = g.with_edge_order(&order).rename_vertices(|id| format!("w{id}"));
        let (pg, ph) = (g.connected_components(), h.connected_components());
        prop_assert_eq!(pg.count, ph.count);
        for (a, i) in &pg.assignment {
            for (b, j) in &pg.assignment {
                let same = ph.assignment[&format!("w{a}")] == ph.assignment[&format!("w{b}")];
                prop_assert_eq!(i == j, same);
            }
        }
    }

    #[test]
    fn encodings_validate(seed in any::<u64>(), len in 1usize..7) {
        let mut rng = random::rng(seed);
        let w = random_word(&mut rng, len);
        let t = random_tree(&mut rng, 3);
        for g in [
            encode_string(&w).unwrap(),
            encode_string_bare(&w).unwrap(),
            encode_circular(&w).unwrap(),
            encode_rooted_circular(&w).unwrap(),
            encode_tree(&t).unwrap(),
        ] {
            prop_assert!(validate_hypergraph(g.alphabet(), g.vertices(), g.hyperedges()).is_ok());
        }
    }

    #[test]
    fn fold_is_order_free(seed in any::<u64>(), d in 1usize..5, len in 1usize..6) {
        let mut rng = random::rng(seed);
        let alg = ProductAlgebra::Dense(random::dense_algebra(&mut rng, d, true));
        let mut labels: Vec<BasisLabel> =
            (0..len).map(|_| BasisLabel::Dense(rng.random_range(0..d))).collect();
        let base = product_fold(&alg, &labels).unwrap();
        labels.shuffle(&mut rng);
        let other = product_fold(&alg, &labels).unwrap();
        for k in 0..d {
            let key = BasisLabel::Dense(k);
            let z = C64::new(0.0, 0.0);
            let (x, y) = (*base.get(&key).unwrap_or(&z), *other.get(&key).unwrap_or(&z));
            prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "{x} vs {y}");
        }
    }

    #[test]
    fn random_algebras_satisfy_laws(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = random::rng(seed);
        prop_assert!(random::dense_algebra(&mut rng, d, true).verify_laws(1e-9).is_ok());
    }

    #[test]
    fn engines_agree(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (m, g) = small_instance(&mut rng, 3);
        let reference = value(&m, &g, Engine::Naive);
        for engine in [Engine::Support, Engine::Factored, Engine::Auto] {
            let v = value(&m, &g, engine);
            prop_assert!(close(v, reference, 1e-8), "{engine:?}: {v} vs {reference}");
        }
    }

    #[test]
    fn gamma_id_matches_naive(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sigma = random::alphabet(&mut rng, 2, 3);
        let d = rng.random_range(1..=3);
        let m = random::identity_hwm(&mut rng, &sigma, d, true);
        let n = rng.random_range(1..=4);
        let g = random::hypergraph(&mut rng, &sigma, n, 3);
        let v = value(&m, &g, Engine::GammaId);
        prop_assert!(close(v, value(&m, &g, Engine::Naive), 1e-8));
    }

    #[test]
    fn multiplicative_over_components(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (m, g1) = small_instance(&mut rng, 2);
        let n = rng.random_range(1..=3);
        let g2 = random::hypergraph(&mut rng, m.alphabet(), n, 3);
        let u = disjoint_union(&g1, &g2).unwrap();
        for engine in [Engine::Naive, Engine::Support, Engine::Factored] {
            let whole = value(&m, &u, engine);
            let parts = value(&m, &g1, engine) * value(&m, &g2, engine);
            prop_assert!(close(whole, parts, 1e-8), "{engine:?}");
        }
    }

    #[test]
    fn relabeling_and_edge_order_do_not_matter(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (m, g) = small_instance(&mut rng, 3);
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.shuffle(&mut rng);
        let h = g.with_edge_order(&order).rename_vertices(|id| format!("{id}'"));
        prop_assert!(close(value(&m, &g, Engine::Factored), value(&m, &h, Engine::Factored), 1e-8));
        prop_assert!(close(value(&m, &g, Engine::Support), value(&m, &h, Engine::Support), 1e-8));
    }

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (m, g) = small_instance(&mut rng, 3);
        let greedy = value(&m, &g, Engine::Factored);
        let cfg = EvalConfig { order: ContractionOrder::RightToLeft, ..EvalConfig::default() };
        let rtl = eval(&m, &g, Engine::Factored, &cfg).unwrap().value;
        prop_assert!(close(greedy, rtl, 1e-7));
    }

    #[test]
    fn circular_rotation(seed in any::<u64>(), len in 1usize..8, shift in 0usize..8) {
        let mut rng = random::rng(seed);
        let d = rng.random_range(1..=3);
        let mats = matrices(&mut rng, d);
        let m = circular_trace_hwm(&mats).unwrap();
        let w = random_word(&mut rng, len);
        let mut r = w.clone();
        r.rotate_left(shift % len);
        let v = value(&m, &encode_circular(&w).unwrap(), Engine::Auto);
        prop_assert!(close(v, trace_of_product(&mats, &w).unwrap(), 1e-8));
        prop_assert!(close(v, value(&m, &encode_circular(&r).unwrap(), Engine::Auto), 1e-8));
    }

    #[test]
    fn closure_identities(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, g) = small_instance(&mut rng, 2);
        let d = rng.random_range(1..=2);
        let alg = random::dense_algebra(&mut rng, d, true);
        let b = random::hwm(&mut rng, a.alphabet(), alg, 0.7, true);
        let s = hwm_sum(&a, &b).unwrap();
        let h = hwm_hadamard(&a, &b).unwrap();
        prop_assert_eq!(s.dim(), Some(a.dim().unwrap() + b.dim().unwrap()));
        prop_assert_eq!(h.dim(), Some(a.dim().unwrap() * b.dim().unwrap()));
        let (va, vb) = (value(&a, &g, Engine::Naive), value(&b, &g, Engine::Naive));
        prop_assert!(close(value(&h, &g, Engine::Factored), va * vb, 1e-8));
        if g.is_connected() {
            prop_assert!(close(value(&s, &g, Engine::Factored), va + vb, 1e-8));
        }
    }

    #[test]
    fn normalization_on_binary_graphs(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sigma = random::alphabet(&mut rng, 2, 3);
        let d = rng.random_range(1..=3);
        let alg = random::dense_algebra(&mut rng, d, false);
        let a = random::hwm(&mut rng, &sigma, alg, 0.8, false);
        let n = normalize_closed_graph(&a, 1e-10).unwrap();
        prop_assert_eq!(n.dim(), a.dim());
        let g = loop {
            let n = rng.random_range(1..=4);
            let g = random::hypergraph(&mut rng, &sigma, n, 2);
            if g.hyperedges().iter().all(|h| h.len() == 2) {
                break g;
            }
        };
        prop_assert!(close(value(&n, &g, Engine::Auto), value(&a, &g, Engine::Naive), 1e-7));
    }

    #[test]
    fn io_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (m, g) = small_instance(&mut rng, 3);
        let g2 = parse_graph(&emit_graph(&g)).unwrap();
        prop_assert_eq!(&g2, &g.canonical());
        prop_assert_eq!(emit_graph(&g2), emit_graph(&g));
        let m2 = parse_model(&emit_model(&m)).unwrap();
        prop_assert_eq!(&m2, &m);
    }
}

fn tiling_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("a", 1usize), ("b", 2)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tiling_count_fibers_and_quotient(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sigma = tiling_alphabet();
        let n_hat = rng.random_range(1..=3);
        let hat = random::hypergraph(&mut rng, &sigma, n_hat, 2);
        let n_big = rng.random_range(1..=5);
        let big = random::hypergraph(&mut rng, &sigma, n_big, 2);
        // Unions of copies of the template always tile it.
        let copies = disjoint_union(&hat, &hat).unwrap();
        for g in [&big, &copies] {
            let report = find_tilings(g, &hat, usize::MAX).unwrap();
            let v = value(&tiling_hwm(&hat, ONE), g, Engine::Support);
            prop_assert!((v.re - report.maps.len() as f64).abs() < 1e-9 && v.im.abs() < 1e-9);
            if !hat.is_connected() {
                continue;
            }
            for map in &report.maps {
                let sizes = map.fiber_sizes(&hat);
                let first = *sizes.values().next().unwrap();
                prop_assert!(sizes.values().all(|&s| s == first));
                prop_assert!(are_isomorphic(&quotient_hypergraph(g, &hat, map).unwrap(), &hat).unwrap());
            }
        }
        prop_assert!(!find_tilings(&copies, &hat, 1).unwrap().maps.is_empty());
    }
}
