use hwm_core::encodings::{encode_circular, encode_string, word};
use hwm_core::engine::evaluate;
use hwm_core::hypergraph::{disjoint_union, RankedAlphabet};
use hwm_core::numeric::{real, C64, ONE};
use hwm_core::tiling::{
    enumerate_hypergraphs, finite_support_hwm, find_tilings, is_tiling_free, scaled_tiling_hwm,
    tiling_hwm, TilingError,
};

fn ring(w: &str) -> hwm_core::hypergraph::Hypergraph {
    encode_circular(&word(w)).unwrap()
}

#[test]
fn rotations_of_a_ring() {
    // Each vertex of aaaaaa maps onto aaa in one of three phases.
    let r = find_tilings(&ring("aaaaaa"), &ring("aaa"), usize::MAX).unwrap();
    assert_eq!(r.maps.len(), 3);
    assert!(r.maps.iter().all(|m| m.fiber_sizes(&ring("aaa")).values().all(|&s| s == 2)));
    let v = evaluate(&tiling_hwm(&ring("aaa"), ONE), &ring("aaaaaa")).unwrap();
    assert!((v - real(3.0)).norm() < 1e-12);
}

#[test]
fn labels_pin_the_map() {
    let r = find_tilings(&ring("abab"), &ring("ab"), usize::MAX).unwrap();
    assert_eq!(r.maps.len(), 1);
    // Four hyperedges, each weighted 3.
    let v = evaluate(&tiling_hwm(&ring("ab"), real(3.0)), &ring("abab")).unwrap();
    assert!((v - real(81.0)).norm() < 1e-9);
    assert!(find_tilings(&ring("abba"), &ring("ab"), usize::MAX).unwrap().maps.is_empty());
}

#[test]
fn strings_tile_only_themselves() {
    let long = encode_string(&word("aa")).unwrap();
    let short = encode_string(&word("a")).unwrap();
    assert!(find_tilings(&long, &short, usize::MAX).unwrap().maps.is_empty());
    assert!(is_tiling_free(&[long, short]).unwrap().is_none());
}

#[test]
fn copies_tile() {
    let hat = ring("ab");
    let two = disjoint_union(&hat, &hat).unwrap();
    let r = find_tilings(&two, &hat, usize::MAX).unwrap();
    assert_eq!(r.maps.len(), 1);
    let w = is_tiling_free(&[hat.clone(), two]).unwrap().expect("witness");
    assert_eq!((w.tiling, w.template), (1, 0));
}

#[test]
fn scaled_model_takes_the_value() {
    let hat = ring("abc");
    let y = C64::new(2.0, -3.0);
    let m = scaled_tiling_hwm(&hat, y).unwrap();
    assert!((evaluate(&m, &hat).unwrap() - y).norm() < 1e-9);
    assert!((evaluate(&m, &ring("ab")).unwrap()).norm() < 1e-12);
}

#[test]
fn finite_support_values() {
    let pairs = vec![(ring("ab"), real(5.0)), (ring("a"), real(7.0)), (ring("abc"), real(-1.0))];
    let m = finite_support_hwm(&pairs).unwrap();
    for (g, y) in &pairs {
        assert!((evaluate(&m, g).unwrap() - y).norm() < 1e-9);
    }
    for other in ["b", "ba"] {
        let v = evaluate(&m, &ring(other)).unwrap();
        let expected = if other == "ba" { 5.0 } else { 0.0 };
        assert!((v - real(expected)).norm() < 1e-9, "{other}: {v}");
    }
    let dup = vec![(ring("ab"), real(1.0)), (ring("ba"), real(2.0))];
    assert!(matches!(finite_support_hwm(&dup), Err(TilingError::DuplicateTemplate(0, 1))));
}

#[test]
fn enumeration_counts() {
    // One vertex of arity 1 has its port alone; two such vertices are
    // either apart or joined.
    let sigma = RankedAlphabet::new([("a", 1usize)]).unwrap();
    assert_eq!(enumerate_hypergraphs(&sigma, 1).len(), 1);
    assert_eq!(enumerate_hypergraphs(&sigma, 2).len(), 3);
}
