mod common;

use autorbit::primitives::{
    count_cyclically_reduced_primitives, count_primitives, enumerate_cyclically_reduced_primitives, euler_phi,
    is_primitive, primitives_by_exponent, primitive_lower_bound,
};
use autorbit::whitehead::minimize;
use autorbit::{Letter, Word};
use common::{gcd, phi_by_count};
use proptest::prelude::*;

#[test]
fn totient_matches_counting() {
    for m in 1..=500 {
        assert_eq!(euler_phi(m).unwrap(), phi_by_count(m), "m={m}");
    }
}

#[test]
fn cyclic_census_matches_formula() {
    for m in 1..=10u64 {
        let census = enumerate_cyclically_reduced_primitives(m as usize).unwrap();
        assert_eq!(census.len() as u64, 4 * m * phi_by_count(m), "m={m}");
        assert_eq!(count_cyclically_reduced_primitives(m).unwrap(), census.len() as u64);
    }
}

#[test]
fn one_rotation_class_per_coprime_pair() {
    for m in 1..=10i64 {
        let groups = primitives_by_exponent(m as usize).unwrap();
        let mut expected = Vec::new();
        for k in -m..=m {
            let l = m - k.abs();
            for l in if l == 0 { vec![0] } else { vec![l, -l] } {
                if gcd(k.unsigned_abs(), l.unsigned_abs()) == 1 {
                    expected.push((k, l));
                }
            }
        }
        expected.sort();
        let keys: Vec<(i64, i64)> = groups.keys().copied().collect();
        assert_eq!(keys, expected, "m={m}");
        for (key, classes) in &groups {
            assert_eq!(classes.len(), 1, "m={m} {key:?}");
            let class = &classes[0];
            assert_eq!(class.len(), class[0].rotations().unwrap().len());
        }
    }
}

#[test]
fn totals_exceed_lower_bound() {
    for m in 1..=10 {
        let c = count_primitives(m).unwrap();
        assert!(c.pass && c.total as f64 > primitive_lower_bound(m), "m={m}");
        assert_eq!(c.cyclically_reduced, c.formula);
    }
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=2usize, any::<bool>()), 1..=max_len)
        .prop_map(|ls| Word::new(2, ls.into_iter().map(|(i, s)| Letter::new(i, s))).unwrap())
}

proptest! {
    #[test]
    fn gcd_filter_agrees_with_minimization(u in word_strategy(14)) {
        prop_assume!(!u.is_empty());
        let full = minimize(&u).word.len() == 1;
        prop_assert_eq!(is_primitive(&u).unwrap(), full);
        if u.exponent_vector().gcd() != 1 {
            prop_assert!(!full);
        }
    }
}
