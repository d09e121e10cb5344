//! Frozen values, each recomputed here by exhaustive search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use csp_comm::games::{brute_force_search, strategy_space_size, Direction, DEFAULT_STRATEGY_CAP};
use csp_comm::patterns::{
    central_binomial, central_vertices, chromatic_number, complete_structure, covering_array, digraph_power_exponent,
    pattern_of, CoveringArray, Partition,
};
use csp_comm::powers::{alice_decode, alice_power, bob_power};
use csp_comm::quantum::alpha_threshold;
use csp_comm::structures::{are_isomorphic, find_homomorphism, is_homomorphism, make_named, CatalogName, Structure};

fn named(name: CatalogName, params: &[usize]) -> Structure {
    make_named(name, params).unwrap()
}

fn some_array_exists(n: usize, m: usize) -> bool {
    (0u32..1 << (n * m)).any(|bits| {
        let rows = (0..n).map(|i| (0..m).map(|j| (bits >> (i * m + j)) as usize & 1).collect()).collect();
        CoveringArray::from_rows(2, 2, rows).unwrap().verify()
    })
}

#[test]
fn four_rows_of_binary_strength_two_need_five_columns() {
    assert!(!some_array_exists(4, 4));
    assert!(some_array_exists(4, 5));
    let built = covering_array(4, 2, 2, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!(built.verify());
    assert!(built.column_count() >= 5);
}

fn brute_chromatic(y: &Structure) -> usize {
    let pattern = pattern_of(y);
    (1..=y.size().max(1))
        .find(|&n| {
            let k = complete_structure(n, &pattern).unwrap();
            (0..n.pow(y.size() as u32)).any(|code| is_homomorphism(&alice_decode(code, n, y.size()), y, &k).unwrap())
        })
        .unwrap()
}

#[test]
fn chromatic_numbers() {
    let cases = [
        (named(CatalogName::Clique, &[2]), 2),
        (named(CatalogName::Clique, &[3]), 3),
        (named(CatalogName::DirectedCycle, &[5]), 3),
        (named(CatalogName::DirectedEdge, &[]), 2),
        (named(CatalogName::Loop, &[]), 1),
        (named(CatalogName::Nae, &[2]), 2),
    ];
    for (y, expected) in cases {
        assert_eq!(chromatic_number(&y).unwrap(), expected);
        assert_eq!(brute_chromatic(&y), expected);
    }
}

/// Central vertices straight from the definition.
fn brute_central(y: &Structure) -> Vec<usize> {
    let pattern = pattern_of(y);
    (0..y.size())
        .filter(|&v| {
            (0..y.signature().len()).all(|s| {
                pattern.partitions(s).iter().all(|p: &Partition| {
                    p.blocks().iter().all(|block| y.relation(s).iter().any(|t| block.iter().all(|&i| t[i] == v)))
                })
            })
        })
        .collect()
}

#[test]
fn central_vertices_match_definition() {
    let four_ary = Structure::single("R", 4, 7, vec![vec![0, 0, 1, 2], vec![3, 4, 0, 0], vec![5, 5, 6, 6]]).unwrap();
    let cases = [
        (four_ary, vec![0]),
        (named(CatalogName::Clique, &[3]), vec![0, 1, 2]),
        (named(CatalogName::DirectedEdge, &[]), vec![]),
        (named(CatalogName::Loop, &[]), vec![0]),
        (named(CatalogName::OneInThree, &[]), vec![0]),
    ];
    for (y, expected) in cases {
        assert_eq!(central_vertices(&y), expected);
        assert_eq!(brute_central(&y), expected);
    }
}

#[test]
fn power_identities() {
    let k = |n| named(CatalogName::Clique, &[n]);
    assert!(are_isomorphic(&alice_power(&k(2), 2).unwrap(), &k(4)).unwrap());
    assert!(are_isomorphic(&alice_power(&k(3), 2).unwrap(), &k(9)).unwrap());
    assert!(are_isomorphic(&bob_power(&k(3), 2).unwrap(), &k(6)).unwrap());
    let nae = |n| named(CatalogName::Nae, &[n]);
    assert!(are_isomorphic(&alice_power(&nae(2), 2).unwrap(), &nae(4)).unwrap());
    assert!(are_isomorphic(&bob_power(&nae(2), 3).unwrap(), &nae(6)).unwrap());
    let rb = |n| named(CatalogName::Rainbow, &[n]);
    assert!(are_isomorphic(&bob_power(&rb(3), 2).unwrap(), &rb(6)).unwrap());
}

#[test]
fn one_way_messages_for_an_edge_against_a_single_arc() {
    let k2 = named(CatalogName::Clique, &[2]);
    let d2 = named(CatalogName::DirectedEdge, &[]);
    assert_eq!(strategy_space_size(&k2, &d2, 2, Direction::Alice), 1024);
    assert!(brute_force_search(&k2, &d2, 2, Direction::Alice, DEFAULT_STRATEGY_CAP).unwrap().is_some());
    assert!(brute_force_search(&k2, &d2, 2, Direction::Bob, DEFAULT_STRATEGY_CAP).unwrap().is_none());
    assert!(find_homomorphism(&k2, &alice_power(&d2, 2).unwrap()).unwrap().is_some());
    assert!(find_homomorphism(&k2, &bob_power(&d2, 2).unwrap()).unwrap().is_none());
}

#[test]
fn digraph_exponents() {
    let expected = [(2, 3), (3, 5), (4, 5), (5, 6), (6, 6), (7, 7), (8, 7)];
    for (m, k) in expected {
        assert_eq!(digraph_power_exponent(m), k, "m = {m}");
        let direct = (m as f64).log2() + (m as f64).log2().log2() + 2.0;
        assert_eq!(k, direct.ceil() as usize);
        assert!(central_binomial(k) >= m as u128);
    }
    assert_eq!(central_binomial(7), 35);
}

#[test]
fn alpha_thresholds() {
    for (d, a) in [(1, std::f64::consts::FRAC_1_SQRT_2), (2, 0.965_925_826_289_068_3), (3, 0.985_598_559_653_488_7)] {
        assert!((alpha_threshold(d).unwrap() - a).abs() < 1e-12, "d = {d}");
    }
}
