use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use csp_comm::games::{
    alice_strategy_from_rows, bob_strategy_from_map, brute_force_search, verify_perfect, Direction,
    Strategy as GameStrategy, DEFAULT_STRATEGY_CAP,
};
use csp_comm::geometry::{check_frame_adjacency, is_frame, realify_frame, sample_adjacent_frames};
use csp_comm::linalg::{random_unitary, C64};
use csp_comm::patterns::{covering_array, pattern_of, tuple_partition, Partition};
use csp_comm::powers::{
    alice_contains, alice_decode, alice_power, bob_contains, bob_power, is_homomorphism_into_alice_power,
    is_homomorphism_into_bob_power,
};
use csp_comm::quantum::{marginal_residual, pvm_tuple_partition, quantum_relation_membership, Pvm};
use csp_comm::structures::{find_homomorphism, is_homomorphism, Relation, Structure, Vertex};

fn digraph(size: usize, max_edges: usize) -> impl Strategy<Value = Structure> {
    proptest::collection::vec((0..size, 0..size), 0..=max_edges).prop_map(move |edges| {
        Structure::single("E", 2, size, edges.into_iter().map(|(a, b)| vec![a, b]).collect()).unwrap()
    })
}

fn sized_digraph(max_size: usize, max_edges: usize) -> impl Strategy<Value = Structure> {
    (1..=max_size).prop_flat_map(move |n| digraph(n, max_edges))
}

fn all_maps(n: usize, m: usize) -> impl Iterator<Item = Vec<Vertex>> {
    let total = m.pow(n as u32);
    (0..total).map(move |code| alice_decode(code, m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_matches_enumeration(x in sized_digraph(4, 6), y in sized_digraph(3, 5)) {
        let found = find_homomorphism(&x, &y).unwrap();
        let exists = all_maps(x.size(), y.size()).any(|h| is_homomorphism(&h, &x, &y).unwrap());
        prop_assert_eq!(found.is_some(), exists);
        if let Some(h) = found {
            prop_assert!(is_homomorphism(h.as_slice(), &x, &y).unwrap());
        }
    }

    #[test]
    fn alice_membership_is_some_projection(y in sized_digraph(3, 4), k in 1usize..=3, seed in any::<u64>()) {
        let rel = y.relation(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<Vec<Vertex>> = (0..2)
            .map(|_| (0..k).map(|_| rand::Rng::random_range(&mut rng, 0..y.size())).collect())
            .collect();
        let direct = (0..k).any(|j| rel.contains(&[entries[0][j], entries[1][j]]));
        prop_assert_eq!(alice_contains(rel, &entries), direct);
    }

    #[test]
    fn bob_membership_is_slotwise(y in sized_digraph(3, 4), slots in proptest::collection::vec((0usize..2, 0usize..3), 2)) {
        let rel = y.relation(0);
        let entries: Vec<(usize, Vertex)> = slots.into_iter().map(|(s, v)| (s, v % y.size())).collect();
        let direct = (0..2).all(|slot| {
            rel.iter().any(|t| entries.iter().zip(t).all(|(&(s, v), &w)| s != slot || v == w))
        });
        prop_assert_eq!(bob_contains(rel, &entries), direct && !rel.is_empty());
    }

    #[test]
    fn lazy_power_checks_match_materialized(x in sized_digraph(3, 4), y in sized_digraph(2, 3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 2;
        let a = alice_power(&y, k).unwrap();
        let map: Vec<Vertex> = (0..x.size()).map(|_| rand::Rng::random_range(&mut rng, 0..a.size())).collect();
        let rows: Vec<Vec<Vertex>> = map.iter().map(|&v| alice_decode(v, y.size(), k)).collect();
        prop_assert_eq!(
            is_homomorphism_into_alice_power(&x, &y, k, &rows).unwrap(),
            is_homomorphism(&map, &x, &a).unwrap()
        );
        let b = bob_power(&y, k).unwrap();
        let bob: Vec<(usize, Vertex)> = (0..x.size())
            .map(|_| (rand::Rng::random_range(&mut rng, 0..k), rand::Rng::random_range(&mut rng, 0..y.size())))
            .collect();
        let encoded: Vec<Vertex> = bob.iter().map(|&(s, v)| s * y.size() + v).collect();
        prop_assert_eq!(
            is_homomorphism_into_bob_power(&x, &y, k, &bob).unwrap(),
            is_homomorphism(&encoded, &x, &b).unwrap()
        );
    }

    #[test]
    fn strategies_win_exactly_for_homomorphisms(x in sized_digraph(2, 2), y in sized_digraph(2, 3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 2;
        let rows: Vec<Vec<Vertex>> = (0..x.size())
            .map(|_| (0..k).map(|_| rand::Rng::random_range(&mut rng, 0..y.size())).collect())
            .collect();
        let hom = is_homomorphism_into_alice_power(&x, &y, k, &rows).unwrap();
        if let Ok(s) = alice_strategy_from_rows(&x, &y, k, &rows) {
            prop_assert!(hom);
            prop_assert!(verify_perfect(&x, &y, &GameStrategy::Alice(s)).unwrap().perfect);
        } else {
            prop_assert!(!hom);
        }
        let map: Vec<(usize, Vertex)> = (0..x.size())
            .map(|_| (rand::Rng::random_range(&mut rng, 0..k), rand::Rng::random_range(&mut rng, 0..y.size())))
            .collect();
        let hom = is_homomorphism_into_bob_power(&x, &y, k, &map).unwrap();
        match bob_strategy_from_map(&x, &y, k, &map) {
            Ok(s) => prop_assert!(hom && verify_perfect(&x, &y, &GameStrategy::Bob(s)).unwrap().perfect),
            Err(_) => prop_assert!(!hom),
        }
    }

    #[test]
    fn brute_force_matches_power_homomorphisms(x in sized_digraph(2, 2), y in sized_digraph(2, 2)) {
        for k in 1..=2 {
            let alice = brute_force_search(&x, &y, k, Direction::Alice, DEFAULT_STRATEGY_CAP).unwrap();
            let hom = find_homomorphism(&x, &alice_power(&y, k).unwrap()).unwrap();
            prop_assert_eq!(alice.is_some(), hom.is_some());
            let bob = brute_force_search(&x, &y, k, Direction::Bob, DEFAULT_STRATEGY_CAP).unwrap();
            let hom = find_homomorphism(&x, &bob_power(&y, k).unwrap()).unwrap();
            prop_assert_eq!(bob.is_some(), hom.is_some());
        }
    }

    #[test]
    fn refinement_is_a_partial_order(a in proptest::collection::vec(0u8..3, 4), b in proptest::collection::vec(0u8..3, 4)) {
        let p = tuple_partition(&a).unwrap();
        let q = tuple_partition(&b).unwrap();
        prop_assert!(p.refines(&p).unwrap());
        prop_assert!(Partition::discrete(4).refines(&p).unwrap());
        prop_assert!(p.refines(&Partition::indiscrete(4)).unwrap());
        if p.refines(&q).unwrap() && q.refines(&p).unwrap() {
            prop_assert_eq!(&p, &q);
        }
        let direct = (0..4).all(|i| (0..4).all(|j| a[i] != a[j] || b[i] == b[j]));
        prop_assert_eq!(p.refines(&q).unwrap(), direct);
    }

    #[test]
    fn patterns_are_downward_closed(y in sized_digraph(3, 4)) {
        prop_assert!(pattern_of(&y).is_downward_closed());
    }

    #[test]
    fn covering_arrays_verify(n in 2usize..9, r in 1usize..4, q in 1usize..4, seed in any::<u64>()) {
        prop_assume!(r <= n);
        let ca = covering_array(n, r, q, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(ca.row_count(), n);
        prop_assert!(ca.verify());
    }

    #[test]
    fn adjacent_samples_stay_adjacent(n in 2usize..=4, d in 1usize..=3, seed in any::<u64>()) {
        let s = sample_adjacent_frames(n, d, seed).unwrap();
        prop_assert!(is_frame(&s.m, 1e-9).is_frame && is_frame(&s.m_prime, 1e-9).is_frame);
        prop_assert!(check_frame_adjacency(&s.m, &s.m_prime, &s.witness, 1e-9).unwrap());
        let r = realify_frame(&s.m, 1e-9).unwrap();
        let before = is_frame(&s.m, 1e-9);
        let after = is_frame(&r, 2e-9);
        prop_assert!(after.is_frame);
        prop_assert!(after.trace_error <= 2.0 * before.trace_error.max(1e-15));
    }
}

/// PVMs diagonal in one random basis, with outcome labels per basis vector.
fn joint_diagonal(labels: &[Vec<usize>], outcomes: usize, seed: u64) -> Vec<Pvm> {
    let d = labels[0].len();
    let u = random_unitary(d, &mut ChaCha8Rng::seed_from_u64(seed));
    let basis: Vec<Vec<C64>> = (0..d).map(|j| u.column(j)).collect();
    labels.iter().map(|l| Pvm::from_basis(&basis, l, outcomes).unwrap()).collect()
}

/// Searches every assignment of basis vectors to relation tuples for a
/// diagonal witness with the right marginals.
fn diagonal_witness_exists(labels: &[Vec<usize>], rel: &Relation) -> bool {
    let d = labels[0].len();
    let m = rel.len();
    if m == 0 {
        return false;
    }
    all_maps(d, m).any(|assignment| {
        assignment.iter().enumerate().all(|(j, &t)| labels.iter().enumerate().all(|(i, l)| rel.tuples()[t][i] == l[j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn product_criterion_matches_diagonal_search(
        y in sized_digraph(3, 5),
        d in 1usize..=3,
        raw in proptest::collection::vec(0usize..3, 6),
        seed in any::<u64>(),
    ) {
        let n = y.size();
        let labels: Vec<Vec<usize>> = (0..2).map(|i| (0..d).map(|j| raw[i * 3 + j] % n).collect()).collect();
        let pvms = joint_diagonal(&labels, n, seed);
        let rel = y.relation(0);
        let found = quantum_relation_membership(&pvms, rel, 1e-9).unwrap();
        prop_assert_eq!(found.is_some(), diagonal_witness_exists(&labels, rel));
        if let Some(w) = found {
            prop_assert!(marginal_residual(&pvms, &w).unwrap() <= 1e-8);
            let pi = pvm_tuple_partition(&pvms, 1e-9).unwrap();
            for t in w.nonzero_support(1e-9) {
                prop_assert!(pi.refines(&tuple_partition(t).unwrap()).unwrap());
            }
        }
    }
}
