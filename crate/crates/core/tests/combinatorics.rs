use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use twverma::{Root, RootSystem, Weight, WeylElement, WeylGroup};

const SMALL: [&str; 4] = ["A1", "A2", "B2", "G2"];
const UP_TO_RANK_3: [&str; 7] = ["A1", "A2", "B2", "G2", "A3", "B3", "C3"];

fn group(label: &str) -> WeylGroup {
    WeylGroup::from_label(label).unwrap()
}

/// Number of ways to write `nu` as a multiset of positive roots, by brute force.
fn naive_partitions(roots: &[Root], nu: &[i64]) -> u64 {
    fn go(roots: &[Root], k: usize, rest: &mut Vec<i64>) -> u64 {
        if rest.iter().all(|&c| c == 0) {
            return 1;
        }
        if k == roots.len() {
            return 0;
        }
        let mut total = 0;
        let beta = &roots[k].coords;
        let mut used = 0;
        loop {
            total += go(roots, k + 1, rest);
            if rest.iter().zip(beta).any(|(r, b)| r < b) {
                break;
            }
            for (r, b) in rest.iter_mut().zip(beta) {
                *r -= b;
            }
            used += 1;
        }
        for (r, b) in rest.iter_mut().zip(beta) {
            *r += b * used;
        }
        total
    }
    go(roots, 0, &mut nu.to_vec())
}

fn vectors_up_to_height(rank: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                let used: i64 = v.iter().sum();
                (0..=h - used).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn kostant_matches_enumeration() {
    for label in UP_TO_RANK_3 {
        let rs = RootSystem::from_label(label).unwrap();
        for nu in vectors_up_to_height(rs.rank(), 6) {
            let expected = BigUint::from(naive_partitions(rs.positive_roots(), &nu));
            assert_eq!(rs.kostant_partition(&nu), expected, "{label} {nu:?}");
        }
    }
}

#[test]
fn positive_roots_sum_to_two_rho() {
    for label in ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "B4", "D4", "F4"] {
        let rs = RootSystem::from_label(label).unwrap();
        let mut total = vec![0i64; rs.rank()];
        for beta in rs.positive_roots() {
            for (t, c) in total.iter_mut().zip(&beta.coords) {
                *t += c;
            }
        }
        let two_rho = rs.rho().scale(&BigRational::from_integer(2.into()));
        assert_eq!(rs.root_lattice_coords(&two_rho), Some(total), "{label}");
    }
}

#[test]
fn dot_action_is_a_group_action() {
    let half = BigRational::new(1.into(), 2.into());
    for label in SMALL {
        let g = group(label);
        let rs = g.root_system();
        let mut coords: Vec<BigRational> = (0..rs.rank()).map(|i| BigRational::from_integer((i as i64 - 3).into())).collect();
        coords[0] += &half;
        let lam = Weight::new(coords);
        for w in g.elements() {
            let w_lam = rs.dot_action(w, &lam).unwrap();
            for v in g.elements() {
                let direct = rs.dot_action(&g.multiply(v, w).unwrap(), &lam).unwrap();
                assert_eq!(rs.dot_action(v, &w_lam).unwrap(), direct, "{label}");
            }
        }
        assert_eq!(rs.dot_action(g.identity(), &lam).unwrap(), lam);
    }
}

#[test]
fn inversion_sets_have_length_many_roots() {
    for label in UP_TO_RANK_3 {
        let g = group(label);
        for w in g.elements() {
            let inv = g.inversion_set(w).unwrap();
            assert_eq!(inv.len(), w.length(), "{label} {}", g.name(w));
            // beta in R+(w) iff w^{-1} beta < 0
            let w_inv = g.inverse(w).unwrap();
            for beta in g.root_system().positive_roots() {
                let image = g.root_system().apply_root(&w_inv, beta).unwrap();
                assert_eq!(inv.contains(beta), image.is_negative());
            }
        }
    }
}

#[test]
fn inversion_set_of_w_w0_is_the_complement() {
    for label in ["B2", "B3"] {
        let g = group(label);
        let all: BTreeSet<Root> = g.root_system().positive_roots().iter().cloned().collect();
        for w in g.elements() {
            let ww0 = g.multiply(w, g.longest()).unwrap();
            let left: BTreeSet<Root> = g.inversion_set(&ww0).unwrap().roots.into_iter().collect();
            let inv: BTreeSet<Root> = g.inversion_set(w).unwrap().roots.into_iter().collect();
            let right: BTreeSet<Root> = all.difference(&inv).cloned().collect();
            assert_eq!(left, right, "{label} {}", g.name(w));
        }
    }
}

/// Lower Bruhat interval of `y` as the set of products of subwords of a reduced word.
fn subword_products(g: &WeylGroup, y: &WeylElement) -> BTreeSet<usize> {
    let word = y.word();
    let rs = g.root_system();
    (0u32..1 << word.len())
        .map(|mask| {
            let sub: Vec<usize> = word.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &s)| s).collect();
            g.index_of(&rs.element_from_word(&sub).unwrap()).unwrap()
        })
        .collect()
}

#[test]
fn bruhat_matches_subwords_exhaustively() {
    for label in SMALL {
        let g = group(label);
        for (yi, y) in g.elements().iter().enumerate() {
            let below = subword_products(&g, y);
            for xi in 0..g.order() {
                assert_eq!(g.bruhat_leq_idx(xi, yi), below.contains(&xi), "{label}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn bruhat_matches_subwords_in_b3(x in 0usize..48, y in 0usize..48) {
        let g = b3();
        let below = subword_products(g, g.element(y));
        prop_assert_eq!(g.bruhat_leq_idx(x, y), below.contains(&x));
    }
}

fn b3() -> &'static WeylGroup {
    static G: std::sync::OnceLock<WeylGroup> = std::sync::OnceLock::new();
    G.get_or_init(|| group("B3"))
}

#[test]
fn root_sequences_verify() {
    for label in UP_TO_RANK_3 {
        let g = group(label);
        for w in g.elements() {
            let seq = g.root_sequence_through(w).unwrap();
            assert_eq!(seq.split, w.length());
            let inv: BTreeSet<Root> = g.inversion_set(w).unwrap().roots.into_iter().collect();
            let head: BTreeSet<Root> = seq.betas[..seq.split].iter().cloned().collect();
            assert_eq!(head, inv, "{label} {}", g.name(w));
            let all: BTreeSet<Root> = seq.betas.iter().cloned().collect();
            assert_eq!(all.len(), g.root_system().positive_roots().len());
        }
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..50, 1i64..8).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn weight(rank: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(rational(), rank).prop_map(Weight::new)
}

proptest! {
    #[test]
    fn pairing_is_linear((label, lam, mu) in prop::sample::select(vec![("A2", 2), ("B2", 2), ("G2", 2), ("B3", 3), ("C3", 3)])
        .prop_flat_map(|(label, rank)| (Just(label), weight(rank), weight(rank)))) {
        let rs = RootSystem::from_label(label).unwrap();
        let sum = &lam + &mu;
        for beta in rs.positive_roots() {
            let lhs = rs.pairing(&sum, beta).unwrap();
            let rhs = rs.pairing(&lam, beta).unwrap() + rs.pairing(&mu, beta).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn words_reduce_to_canonical_form(label in prop::sample::select(vec!["A2", "B2", "G2", "A3", "B3"]),
                                      raw in prop::collection::vec(1usize..=3, 0..14)) {
        let g = group(label);
        let rs = g.root_system();
        let word: Vec<usize> = raw.into_iter().map(|s| 1 + (s - 1) % rs.rank()).collect();
        let w = rs.element_from_word(&word).unwrap();
        prop_assert!(w.length() <= word.len());
        prop_assert_eq!(w.length() % 2, word.len() % 2);
        prop_assert_eq!(&rs.element_from_word(w.word()).unwrap(), &w);
        prop_assert_eq!(g.inversion_set(&w).unwrap().len(), w.length());
        prop_assert_eq!(g.parse(&g.name(&w)).unwrap(), w);
    }
}

#[test]
fn group_orders() {
    let expected = [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48), ("C3", 48), ("D4", 192), ("F4", 1152)];
    for (label, order) in expected {
        let g = Arc::new(group(label));
        assert_eq!(g.order(), order, "{label}");
        assert_eq!(g.longest().length(), g.root_system().positive_roots().len());
    }
}
