//! Elementary Whitehead automorphisms and length minimisation.
//!
//! Type I moves permute the letters `x_i^{±1}` compatibly with inversion.
//! Type II moves are given by a multiplier letter `a` and a letter set `A`
//! with `a ∈ A`, `a⁻¹ ∉ A`: a generator `x ∉ {a, a⁻¹}` becomes `xa` if only
//! `x ∈ A`, `a⁻¹x` if only `x⁻¹ ∈ A`, `a⁻¹xa` if both, and is fixed otherwise.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::endos::GenMap;
use crate::words::{cyclic_overlap, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("type II moves need rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("letter {0:?} is outside the rank")]
    LetterOutOfRange(Letter),
    #[error("multiplier must lie in the letter set and its inverse must not")]
    InvalidSet,
    #[error("signed permutation is not a bijection")]
    NotAPermutation,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum WhiteheadMove {
    /// `images[i]` is the image of `x_{i+1}`.
    TypeI(Vec<Letter>),
    /// `set` is sorted in (index, sign) order and contains `multiplier`.
    TypeII { multiplier: Letter, set: Vec<Letter> },
}

impl WhiteheadMove {
    pub fn type_i(images: Vec<Letter>) -> Result<WhiteheadMove, MoveError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for l in &images {
            if l.index() > n || core::mem::replace(&mut seen[l.index() - 1], true) {
                return Err(MoveError::NotAPermutation);
            }
        }
        Ok(WhiteheadMove::TypeI(images))
    }

    pub fn type_ii(rank: usize, multiplier: Letter, set: impl IntoIterator<Item = Letter>) -> Result<WhiteheadMove, MoveError> {
        if rank < 2 {
            return Err(MoveError::RankTooSmall(rank));
        }
        let mut set: Vec<Letter> = set.into_iter().collect();
        set.sort();
        set.dedup();
        if let Some(&l) = set.iter().chain([&multiplier]).find(|l| l.index() > rank) {
            return Err(MoveError::LetterOutOfRange(l));
        }
        if !set.contains(&multiplier) || set.contains(&multiplier.inverse()) {
            return Err(MoveError::InvalidSet);
        }
        Ok(WhiteheadMove::TypeII { multiplier, set })
    }

    pub fn is_type_i(&self) -> bool {
        matches!(self, WhiteheadMove::TypeI(_))
    }

    pub fn to_genmap(&self, rank: usize) -> GenMap {
        let images = match self {
            WhiteheadMove::TypeI(targets) => {
                assert_eq!(targets.len(), rank);
                targets.iter().map(|&l| Word::letter(rank, l)).collect()
            }
            WhiteheadMove::TypeII { multiplier: a, set } => (1..=rank)
                .map(|i| {
                    let x = Letter::generator(i);
                    if i == a.index() {
                        return Word::letter(rank, x);
                    }
                    let mut letters = Vec::with_capacity(3);
                    if set.contains(&x.inverse()) {
                        letters.push(a.inverse());
                    }
                    letters.push(x);
                    if set.contains(&x) {
                        letters.push(*a);
                    }
                    Word::new(rank, letters).expect("letters within rank")
                })
                .collect(),
        };
        GenMap::new(rank, images).expect("rank-consistent images")
    }

    pub fn inverse(&self) -> WhiteheadMove {
        match self {
            WhiteheadMove::TypeI(targets) => {
                let mut inv = vec![Letter::generator(1); targets.len()];
                for (i, &l) in targets.iter().enumerate() {
                    inv[l.index() - 1] = Letter::new(i + 1, l.is_positive());
                }
                WhiteheadMove::TypeI(inv)
            }
            WhiteheadMove::TypeII { multiplier, set } => {
                let mut set: Vec<Letter> = set
                    .iter()
                    .map(|&l| if l == *multiplier { l.inverse() } else { l })
                    .collect();
                set.sort();
                WhiteheadMove::TypeII { multiplier: multiplier.inverse(), set }
            }
        }
    }
}

impl fmt::Debug for WhiteheadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadMove::TypeI(targets) => write!(f, "TypeI{targets:?}"),
            WhiteheadMove::TypeII { multiplier, set } => write!(f, "TypeII({multiplier:?}, {set:?})"),
        }
    }
}

/// All `2^n · n!` signed permutations: permutations in lexicographic order,
/// and for each one the sign patterns as a binary counter (bit `i` inverts
/// the image of `x_{i+1}`). The identity comes first.
pub fn enumerate_type1(n: usize) -> Vec<WhiteheadMove> {
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        for mask in 0u64..(1u64 << n) {
            let images = perm
                .iter()
                .enumerate()
                .map(|(i, &p)| Letter::new(p, mask & (1 << i) == 0))
                .collect();
            out.push(WhiteheadMove::TypeI(images));
        }
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All `2n · (4^{n−1} − 1)` non-identity Type II moves. Multipliers run in
/// (index, sign) order; for each, the set is a binary counter whose bits
/// `2k` and `2k+1` select `y_k` and `y_k⁻¹` for the remaining generators `y_k`
/// in index order. The zero counter (`A = {a}`) is skipped.
pub fn enumerate_type2(n: usize) -> Result<Vec<WhiteheadMove>, MoveError> {
    if n < 2 {
        return Err(MoveError::RankTooSmall(n));
    }
    let mut out = Vec::with_capacity(2 * n * ((1 << (2 * (n - 1))) - 1));
    for ordinal in 0..2 * n {
        let a = Letter::from_ordinal(ordinal);
        let others: Vec<usize> = (1..=n).filter(|&i| i != a.index()).collect();
        for mask in 1u64..(1u64 << (2 * others.len())) {
            let mut set = vec![a];
            for (k, &g) in others.iter().enumerate() {
                if mask & (1 << (2 * k)) != 0 {
                    set.push(Letter::new(g, true));
                }
                if mask & (1 << (2 * k + 1)) != 0 {
                    set.push(Letter::new(g, false));
                }
            }
            set.sort();
            out.push(WhiteheadMove::TypeII { multiplier: a, set });
        }
    }
    Ok(out)
}

/// The Whitehead moves of one rank with their generator maps, ready for
/// repeated application.
#[derive(Debug, Clone)]
pub struct MoveSet {
    rank: usize,
    moves: Vec<WhiteheadMove>,
    maps: Vec<GenMap>,
    type_i_count: usize,
}

impl MoveSet {
    /// Non-identity Type I moves followed by all Type II moves.
    pub fn new(rank: usize) -> MoveSet {
        let mut moves: Vec<WhiteheadMove> = enumerate_type1(rank).into_iter().skip(1).collect();
        let type_i_count = moves.len();
        if rank >= 2 {
            moves.extend(enumerate_type2(rank).expect("rank >= 2"));
        }
        let maps = moves.iter().map(|m| m.to_genmap(rank)).collect();
        MoveSet { rank, moves, maps, type_i_count }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn get(&self, index: usize) -> &WhiteheadMove {
        &self.moves[index]
    }

    pub fn map(&self, index: usize) -> &GenMap {
        &self.maps[index]
    }

    pub fn type_ii_range(&self) -> core::ops::Range<usize> {
        self.type_i_count..self.moves.len()
    }

    pub(crate) fn apply_into(&self, index: usize, letters: &[Letter], out: &mut Vec<Letter>) {
        self.maps[index].apply_into(letters, out);
    }
}

/// One labelled edge of a witness trace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Move(WhiteheadMove),
    /// Conjugation by the current word's first letter: `l·w ↦ w·l`.
    Rotate,
    /// The inner automorphism `x ↦ g⁻¹ x g`.
    Conjugate(Word),
}

impl fmt::Debug for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Move(m) => write!(f, "{m:?}"),
            Step::Rotate => f.write_str("Rotate"),
            Step::Conjugate(g) => write!(f, "Conjugate({g})"),
        }
    }
}

impl Step {
    pub fn apply(&self, w: &Word) -> Word {
        match self {
            Step::Move(m) => m.to_genmap(w.rank()).apply(w).expect("rank"),
            Step::Rotate => w.rotate_by_one(),
            Step::Conjugate(g) => g.inverse().concat(w).and_then(|x| x.concat(g)).expect("rank"),
        }
    }

    /// Generator map of this step when applied to `current`.
    pub fn to_genmap(&self, current: &Word) -> GenMap {
        let rank = current.rank();
        match self {
            Step::Move(m) => m.to_genmap(rank),
            Step::Rotate => match current.letters().first() {
                Some(&l) => GenMap::conjugation(&Word::letter(rank, l)),
                None => GenMap::identity(rank),
            },
            Step::Conjugate(g) => GenMap::conjugation(g),
        }
    }
}

/// Applies `steps` to `start` in order, returning the final word.
pub fn replay(start: &Word, steps: &[Step]) -> Word {
    steps.iter().fold(start.clone(), |w, s| s.apply(&w))
}

/// The composite automorphism of a trace started at `start`.
pub fn trace_genmap(start: &Word, steps: &[Step]) -> GenMap {
    let mut current = start.clone();
    let mut acc = GenMap::identity(start.rank());
    for s in steps {
        acc = s.to_genmap(&current).compose(&acc).expect("rank");
        current = s.apply(&current);
    }
    acc
}

/// The reversed trace leading from `replay(start, steps)` back to `start`.
pub fn invert_trace(start: &Word, steps: &[Step]) -> Vec<Step> {
    let mut current = start.clone();
    let mut out = Vec::with_capacity(steps.len());
    for s in steps {
        out.push(match s {
            Step::Move(m) => Step::Move(m.inverse()),
            Step::Rotate => match current.letters().first() {
                Some(&l) => Step::Conjugate(Word::letter(current.rank(), l.inverse())),
                None => Step::Conjugate(Word::empty(current.rank())),
            },
            Step::Conjugate(g) => Step::Conjugate(g.inverse()),
        });
        current = s.apply(&current);
    }
    out.reverse();
    out
}

/// Result of [`minimize`].
#[derive(Debug, Clone)]
pub struct Minimization {
    /// Cyclically reduced word of minimal length in the orbit.
    pub word: Word,
    /// Moves and conjugations taking the input to `word`.
    pub steps: Vec<Step>,
    /// `witness.apply(input) == word` exactly.
    pub witness: GenMap,
}

impl Minimization {
    /// Number of length-reducing moves applied.
    pub fn move_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Move(_))).count()
    }
}

/// Cyclically reduces, then greedily applies the Type II move with the
/// largest decrease in cyclic length (earliest in enumeration order on
/// ties) until none decreases it.
pub fn minimize(w: &Word) -> Minimization {
    minimize_with(&MoveSet::new(w.rank()), w)
}

pub fn minimize_with(moves: &MoveSet, w: &Word) -> Minimization {
    assert_eq!(moves.rank(), w.rank());
    let rank = w.rank();
    let mut steps = Vec::new();
    let (core, conjugator) = w.cyclic_reduce();
    if !conjugator.is_empty() {
        steps.push(Step::Conjugate(conjugator));
    }
    let mut current = core.into_letters();
    let mut buf = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for index in moves.type_ii_range() {
            moves.apply_into(index, &current, &mut buf);
            let len = buf.len() - 2 * cyclic_overlap(&buf);
            if len < current.len() && best.is_none_or(|(_, b)| len < b) {
                best = Some((index, len));
            }
        }
        let Some((index, _)) = best else { break };
        moves.apply_into(index, &current, &mut buf);
        let t = cyclic_overlap(&buf);
        steps.push(Step::Move(moves.get(index).clone()));
        if t > 0 {
            steps.push(Step::Conjugate(Word::from_reduced(rank, buf[..t].to_vec())));
        }
        current = buf[t..buf.len() - t].to_vec();
    }
    let witness = trace_genmap(w, &steps);
    Minimization { word: Word::from_reduced(rank, current), steps, witness }
}

/// Length reached by [`minimize`], without recording the trace.
pub fn minimal_length_with(moves: &MoveSet, w: &Word) -> usize {
    let t = cyclic_overlap(w.letters());
    let mut current = w.letters()[t..w.len() - t].to_vec();
    let mut buf = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for index in moves.type_ii_range() {
            moves.apply_into(index, &current, &mut buf);
            let len = buf.len() - 2 * cyclic_overlap(&buf);
            if len < current.len() && best.is_none_or(|(_, b)| len < b) {
                best = Some((index, len));
            }
        }
        let Some((index, _)) = best else { return current.len() };
        moves.apply_into(index, &current, &mut buf);
        let t = cyclic_overlap(&buf);
        current = buf[t..buf.len() - t].to_vec();
    }
}

/// True iff no Type II move shortens the cyclically reduced word `w`.
pub fn is_minimal(w: &Word) -> Result<bool, WordError> {
    is_minimal_with(&MoveSet::new(w.rank()), w)
}

pub fn is_minimal_with(moves: &MoveSet, w: &Word) -> Result<bool, WordError> {
    if !w.is_cyclically_reduced() {
        return Err(WordError::NotCyclicallyReduced);
    }
    let mut buf = Vec::new();
    Ok(moves.type_ii_range().all(|index| {
        moves.apply_into(index, w.letters(), &mut buf);
        buf.len() - 2 * cyclic_overlap(&buf) >= w.len()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn type1_counts() {
        assert_eq!(enumerate_type1(1).len(), 2);
        assert_eq!(enumerate_type1(2).len(), 8);
        assert_eq!(enumerate_type1(3).len(), 48);
        assert!(enumerate_type1(3)[0].to_genmap(3).is_identity());
        let n1 = enumerate_type1(1);
        assert_eq!(n1[1].to_genmap(1), GenMap::parse(1, &["A"]).unwrap());
    }

    #[test]
    fn type2_counts() {
        assert_eq!(enumerate_type2(2).unwrap().len(), 12);
        assert_eq!(enumerate_type2(3).unwrap().len(), 90);
        assert_eq!(enumerate_type2(1), Err(MoveError::RankTooSmall(1)));
        for n in 2..=3 {
            for m in enumerate_type2(n).unwrap() {
                assert!(!m.to_genmap(n).is_identity(), "{m:?}");
            }
        }
    }

    #[test]
    fn type2_alpha() {
        let m = WhiteheadMove::type_ii(2, Letter::generator(2), [Letter::generator(2), Letter::generator(1)]).unwrap();
        assert_eq!(m.to_genmap(2), GenMap::parse(2, &["ab", "b"]).unwrap());
    }

    #[test]
    fn type2_full_set_is_inner() {
        let a = Letter::generator(1);
        let set = (0..6).map(Letter::from_ordinal).filter(|&l| l != a.inverse());
        let m = WhiteheadMove::type_ii(3, a, set).unwrap();
        assert_eq!(m.to_genmap(3), GenMap::parse(3, &["a", "Aba", "Aca"]).unwrap());
    }

    #[test]
    fn type2_validation() {
        let a = Letter::generator(1);
        assert_eq!(WhiteheadMove::type_ii(2, a, [Letter::generator(2)]), Err(MoveError::InvalidSet));
        assert_eq!(WhiteheadMove::type_ii(2, a, [a, a.inverse()]), Err(MoveError::InvalidSet));
        assert!(matches!(WhiteheadMove::type_ii(2, a, [a, Letter::generator(3)]), Err(MoveError::LetterOutOfRange(_))));
    }

    #[test]
    fn type1_swap_is_pi() {
        let swap = WhiteheadMove::type_i(vec![Letter::generator(2), Letter::generator(1)]).unwrap();
        assert_eq!(swap.to_genmap(2), GenMap::parse(2, &["b", "a"]).unwrap());
        assert!(WhiteheadMove::type_i(vec![Letter::generator(1), Letter::generator(1)]).is_err());
    }

    #[test]
    fn inverse_moves_invert() {
        for n in 1..=3 {
            let moves = MoveSet::new(n);
            for i in 0..moves.len() {
                let m = moves.get(i);
                let composed = m.inverse().to_genmap(n).compose(&m.to_genmap(n)).unwrap();
                assert!(composed.is_identity(), "{m:?}");
            }
        }
    }

    #[test]
    fn minimize_examples() {
        let c = minimize(&w("abAB"));
        assert_eq!(c.word, w("abAB"));
        assert!(c.witness.is_identity());

        let m = minimize(&w("abA"));
        assert_eq!(m.word, w("b"));
        assert_eq!(m.witness.apply(&w("abA")).unwrap(), w("b"));
        assert_eq!(m.move_count(), 0);

        let m = minimize(&w("ab"));
        assert_eq!(m.word.len(), 1);
        assert_eq!(m.witness.apply(&w("ab")).unwrap(), m.word);
        assert_eq!(m.move_count(), 1);
    }

    #[test]
    fn is_minimal_examples() {
        assert_eq!(is_minimal(&w("abAB")), Ok(true));
        assert_eq!(is_minimal(&w("aaaaaaaab")), Ok(false));
        assert_eq!(minimize(&w("aaaaaaaab")).word.len(), 1);
        assert_eq!(is_minimal(&w("a")), Ok(true));
        assert_eq!(is_minimal(&w("abA")), Err(WordError::NotCyclicallyReduced));
    }

    #[test]
    fn rank_one_minimize_only_reduces() {
        let x = Word::parse("aaaA", 1).unwrap();
        assert_eq!(minimize(&x).word, Word::parse("aa", 1).unwrap());
    }

    #[test]
    fn trace_inversion() {
        let start = w("abAB");
        let steps = vec![
            Step::Rotate,
            Step::Move(enumerate_type2(2).unwrap()[3].clone()),
            Step::Conjugate(w("ab")),
        ];
        let end = replay(&start, &steps);
        assert_eq!(trace_genmap(&start, &steps).apply(&start).unwrap(), end);
        let back = invert_trace(&start, &steps);
        assert_eq!(replay(&end, &back), start);
    }
}
