mod common;

use std::collections::BTreeSet;

use autorbit::orbits::{image_sphere, is_equivalent, orbit_under_map, peak_set, DEFAULT_CAP};
use autorbit::whitehead::{enumerate_type1, is_minimal, replay, MoveSet};
use autorbit::{GenMap, Letter, Word};
use common::{all_cyclically_reduced_words, apply, cyclic_core, from_raw, to_raw, NaiveGraph, Raw};
use proptest::prelude::*;

fn w(s: &str) -> Word {
    Word::parse(s, 2).unwrap()
}

fn minimal_words(rank: usize, len: usize) -> Vec<Word> {
    all_cyclically_reduced_words(rank, len)
        .into_iter()
        .map(|r| from_raw(rank, &r))
        .filter(|u| is_minimal(u).unwrap())
        .collect()
}

#[test]
fn peak_sets_partition_minimal_words() {
    for len in 1..=5 {
        let minimal = minimal_words(2, len);
        let mut covered: BTreeSet<Word> = BTreeSet::new();
        for u in &minimal {
            if covered.contains(u) {
                continue;
            }
            let ps = peak_set(u, DEFAULT_CAP).unwrap();
            let members = ps.sorted_members();
            for v in &members {
                assert!(covered.insert(v.clone()), "{v} in two classes");
                assert_eq!(peak_set(v, DEFAULT_CAP).unwrap().sorted_members(), members, "{u} vs {v}");
            }
        }
        assert_eq!(covered.len(), minimal.len(), "length {len}");
    }
}

#[test]
fn witnesses_are_sound_and_members_closed() {
    let type_one: Vec<GenMap> = enumerate_type1(2).iter().map(|m| m.to_genmap(2)).collect();
    for u in ["a", "ab", "aabb", "abAB", "aabAB", "abaB", "aaabb"] {
        let ps = peak_set(&w(u), DEFAULT_CAP).unwrap();
        let base = ps.base().clone();
        for v in ps.members() {
            assert_eq!(ps.witness(&v).unwrap().apply(&base).unwrap(), v, "{u} -> {v}");
            assert_eq!(replay(&base, &ps.trace(&v).unwrap()), v);
            assert!(ps.contains(&v.rotate_by_one()));
            for t in &type_one {
                assert!(ps.contains(&t.apply(&v).unwrap()));
            }
        }
    }
}

#[test]
fn peak_sets_match_naive_components() {
    for len in 1..=5 {
        let mut graph = NaiveGraph::build(2, len);
        for raw in all_cyclically_reduced_words(2, len) {
            let u = from_raw(2, &raw);
            let ps = peak_set(&u, DEFAULT_CAP).unwrap();
            if ps.base().len() != len {
                continue;
            }
            let expected = graph.component(&raw);
            let actual: BTreeSet<Raw> = ps.members().map(|v| to_raw(&v)).collect();
            assert_eq!(actual, expected, "{u}");
        }
    }
}

#[test]
fn sphere_matches_brute_force() {
    // Length-6 automorphic images of abAB, found independently: every
    // reduced word of length 6 whose naive descent lands in A(abAB).
    let base = w("abAB");
    let class: BTreeSet<Raw> = peak_set(&base, DEFAULT_CAP).unwrap().members().map(|v| to_raw(&v)).collect();
    let moves = common::type_two_moves(2);
    let mut expected = BTreeSet::new();
    for raw in common::all_reduced_words(2, 6) {
        let mut cur = raw.clone();
        loop {
            let next = moves.iter().map(|m| apply(m, &cur)).find(|img| img.len() < cur.len());
            match next {
                Some(img) => cur = img,
                None => break,
            }
        }
        if cur.len() == 4 && class.contains(&cyclic_core(&cur)) {
            let v = from_raw(2, &raw);
            assert!(is_equivalent(&base, &v, DEFAULT_CAP).unwrap().is_equivalent());
            expected.insert(v);
        }
    }
    let sphere: BTreeSet<Word> = image_sphere(&base, 2, DEFAULT_CAP).unwrap().into_iter().collect();
    assert_eq!(sphere, expected);
}

#[test]
fn sphere_growth_stays_under_shape_bound() {
    let base = w("abAB");
    let size = |k: usize| image_sphere(&base, k, DEFAULT_CAP).unwrap().len() as u128;
    let shape = |k: usize| 3u128.pow(k as u32) * ((4 + k) as u128).pow(4);
    // below the calibration point the constant is meaningless (|A| = 8 at K = 0);
    // size(k) <= c·shape(k) with c = size(2)/shape(2), cross-multiplied
    for k in 2..=8 {
        assert!(size(k) * shape(2) <= size(2) * shape(k), "K={k}");
    }
}

#[test]
fn commutator_sphere_sizes() {
    // conjugates g·u'·g⁻¹ of the 8 length-4 forms by non-cancelling g
    let base = w("abAB");
    for k in 0..=8usize {
        let expected = match k {
            0 => 8,
            _ if k % 2 == 1 => 0,
            _ => 16 * 3usize.pow(k as u32 / 2 - 1),
        };
        assert_eq!(image_sphere(&base, k, DEFAULT_CAP).unwrap().len(), expected, "K={k}");
    }
}

#[test]
fn orbit_cardinality_stable_once_closed() {
    let sims = GenMap::parse(3, &["Bc", "a", ""]).unwrap();
    let u = Word::parse("abc", 3).unwrap();
    let closed = orbit_under_map(&sims, &u, 5).unwrap();
    assert!(closed.is_closed());
    for steps in 5..40 {
        assert_eq!(orbit_under_map(&sims, &u, steps).unwrap(), closed);
    }
    let short = orbit_under_map(&sims, &u, 2).unwrap();
    assert!(!short.is_closed());
    assert_eq!(short.words[..], closed.words[..3]);
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=2usize, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Word::new(2, ls.into_iter().map(|(i, s)| Letter::new(i, s))).unwrap())
}

/// Random automorphic image of `u`, so positive pairs are common.
fn image_of(u: &Word, picks: &[usize]) -> Word {
    let moves = MoveSet::new(2);
    picks.iter().fold(u.clone(), |acc, &i| moves.map(i % moves.len()).apply(&acc).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn equivalence_is_symmetric(u in word_strategy(8), v in word_strategy(8), picks in prop::collection::vec(any::<usize>(), 0..4), related in any::<bool>()) {
        let v = if related { image_of(&u, &picks) } else { v };
        let forward = is_equivalent(&u, &v, DEFAULT_CAP).unwrap();
        let backward = is_equivalent(&v, &u, DEFAULT_CAP).unwrap();
        prop_assert_eq!(forward.is_equivalent(), backward.is_equivalent());
        if related {
            prop_assert!(forward.is_equivalent());
        }
        if let Some(cert) = forward.certificate() {
            prop_assert_eq!(cert.witness.apply(&u).unwrap(), v.clone());
            prop_assert_eq!(replay(&u, &cert.steps), v.clone());
        }
        if let Some(cert) = backward.certificate() {
            prop_assert_eq!(cert.witness.apply(&v).unwrap(), u.clone());
        }
    }
}
