//! Primitive elements: membership test, censuses in `F_2`, and the counts
//! they are compared against.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::whitehead::{minimal_length_with, MoveSet};
use crate::words::{is_cyclically_reduced_slice, Letter, Word};

/// Longest word length a census will enumerate (`4·3^{m−1}` words).
pub const MAX_CENSUS_LENGTH: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrimitiveError {
    #[error("the empty word is never primitive")]
    EmptyWord,
    #[error("length must be at least 1")]
    ZeroLength,
    #[error("census length {m} exceeds the budget of {max}")]
    BudgetExceeded { m: usize, max: usize },
}

/// A word is primitive iff its automorphic orbit reaches length one.
pub fn is_primitive(u: &Word) -> Result<bool, PrimitiveError> {
    is_primitive_with(&MoveSet::new(u.rank()), u)
}

pub fn is_primitive_with(moves: &MoveSet, u: &Word) -> Result<bool, PrimitiveError> {
    if u.is_empty() {
        return Err(PrimitiveError::EmptyWord);
    }
    if u.exponent_vector().gcd() != 1 {
        return Ok(false);
    }
    Ok(minimal_length_with(moves, u) == 1)
}

/// Euler's totient with `Φ(1) = 1`.
pub fn euler_phi(m: u64) -> Result<u64, PrimitiveError> {
    if m == 0 {
        return Err(PrimitiveError::ZeroLength);
    }
    Ok(crate::endos::factorize(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1)))
}

/// `4·m·Φ(m)`, the number of cyclically reduced primitive words of length
/// `m` in `F_2`.
pub fn count_cyclically_reduced_primitives(m: u64) -> Result<u64, PrimitiveError> {
    Ok(4 * m * euler_phi(m)?)
}

fn check_census(m: usize) -> Result<(), PrimitiveError> {
    if m == 0 {
        return Err(PrimitiveError::ZeroLength);
    }
    if m > MAX_CENSUS_LENGTH {
        return Err(PrimitiveError::BudgetExceeded { m, max: MAX_CENSUS_LENGTH });
    }
    Ok(())
}

/// Calls `visit` on every freely reduced word of length `len`, in
/// lexicographic (index, sign) order.
pub fn for_each_reduced_word(rank: usize, len: usize, mut visit: impl FnMut(&[Letter])) {
    fn go(rank: usize, len: usize, buf: &mut Vec<Letter>, visit: &mut dyn FnMut(&[Letter])) {
        if buf.len() == len {
            visit(buf);
            return;
        }
        for ordinal in 0..2 * rank {
            let l = Letter::from_ordinal(ordinal);
            if buf.last() == Some(&l.inverse()) {
                continue;
            }
            buf.push(l);
            go(rank, len, buf, visit);
            buf.pop();
        }
    }
    go(rank, len, &mut Vec::with_capacity(len), &mut visit);
}

/// All cyclically reduced words of length `len`, in lexicographic order.
pub fn cyclically_reduced_words(rank: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_reduced_word(rank, len, |w| {
        if is_cyclically_reduced_slice(w) {
            out.push(Word::from_reduced(rank, w.to_vec()));
        }
    });
    out
}

/// Census of the cyclically reduced primitive words of length `m` in `F_2`,
/// in lexicographic order. Rotations are distinct words.
pub fn enumerate_cyclically_reduced_primitives(m: usize) -> Result<Vec<Word>, PrimitiveError> {
    check_census(m)?;
    let moves = MoveSet::new(2);
    let mut out = Vec::new();
    for_each_reduced_word(2, m, |w| {
        if is_cyclically_reduced_slice(w) {
            let word = Word::from_reduced(2, w.to_vec());
            if is_primitive_with(&moves, &word) == Ok(true) {
                out.push(word);
            }
        }
    });
    Ok(out)
}

/// Exact census of primitive words of length `m` in `F_2` against the
/// lower bound `8/(3√3)·√3^m` (odd `m`) or `4/3·√3^m` (even `m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveCount {
    pub m: usize,
    pub total: u64,
    pub cyclically_reduced: u64,
    pub formula: u64,
    pub bound: f64,
    /// `total` strictly exceeds `bound` (decided in exact arithmetic).
    pub pass: bool,
}

/// The lower bound as `numerator / 3`, exact.
fn bound_numerator(m: usize) -> u128 {
    if m % 2 == 1 {
        8 * 3u128.pow(((m - 1) / 2) as u32)
    } else {
        4 * 3u128.pow((m / 2) as u32)
    }
}

pub fn primitive_lower_bound(m: usize) -> f64 {
    bound_numerator(m) as f64 / 3.0
}

pub fn count_primitives(m: usize) -> Result<PrimitiveCount, PrimitiveError> {
    check_census(m)?;
    let moves = MoveSet::new(2);
    let (mut total, mut cyclic) = (0u64, 0u64);
    for_each_reduced_word(2, m, |w| {
        let word = Word::from_reduced(2, w.to_vec());
        if is_primitive_with(&moves, &word) == Ok(true) {
            total += 1;
            if is_cyclically_reduced_slice(w) {
                cyclic += 1;
            }
        }
    });
    Ok(PrimitiveCount {
        m,
        total,
        cyclically_reduced: cyclic,
        formula: count_cyclically_reduced_primitives(m as u64)?,
        bound: primitive_lower_bound(m),
        pass: 3 * u128::from(total) > bound_numerator(m),
    })
}

/// Exponent vector `(k, l)` to its rotation classes.
pub type ExponentClasses = BTreeMap<(i64, i64), Vec<Vec<Word>>>;

/// Cyclically reduced primitives of length `m` grouped by exponent vector,
/// each group split into rotation classes (classes and their members sorted).
pub fn primitives_by_exponent(m: usize) -> Result<ExponentClasses, PrimitiveError> {
    let mut groups: BTreeMap<(i64, i64), BTreeMap<Word, Vec<Word>>> = BTreeMap::new();
    for word in enumerate_cyclically_reduced_primitives(m)? {
        let e = word.exponent_vector();
        let key = (e.0[0], e.0[1]);
        let class = word.rotations().expect("cyclically reduced").into_iter().min().unwrap();
        groups.entry(key).or_default().entry(class).or_default().push(word);
    }
    Ok(groups
        .into_iter()
        .map(|(k, classes)| (k, classes.into_values().collect()))
        .collect())
}
