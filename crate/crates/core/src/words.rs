//! Letters, freely reduced words and their elementary operations.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg};

/// Largest rank a [`Letter`] can address.
pub const MAX_RANK: usize = i16::MAX as usize;

/// Largest rank expressible in the compact `a`..`z` syntax.
pub const MAX_COMPACT_RANK: usize = 26;

// Exponents beyond this in verbose syntax are rejected rather than expanded.
const MAX_VERBOSE_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("rank {rank} is out of range (1..={max})")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("character {ch:?} at position {position} is not a letter of rank {rank}")]
    InvalidChar { ch: char, position: usize, rank: usize },
    #[error("generator x{index} does not exist in rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },
    #[error("malformed token {token:?}")]
    MalformedToken { token: String },
    #[error("malformed exponent in token {token:?}")]
    MalformedExponent { token: String },
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
}

/// A generator `x_i` or its inverse, stored as `+i` / `-i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
#[repr(transparent)]
pub struct Letter(i16);

impl Letter {
    /// Panics if `index` is zero or exceeds [`MAX_RANK`].
    pub fn new(index: usize, positive: bool) -> Letter {
        assert!((1..=MAX_RANK).contains(&index), "letter index {index} out of range");
        let raw = index as i16;
        Letter(if positive { raw } else { -raw })
    }

    pub fn generator(index: usize) -> Letter {
        Letter::new(index, true)
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i8 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the (index, sign) order: x1, x1^-1, x2, x2^-1, ...
    #[inline]
    pub fn ordinal(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.0 < 0)
    }

    pub fn from_ordinal(ordinal: usize) -> Letter {
        Letter::new(ordinal / 2 + 1, ordinal.is_multiple_of(2))
    }

    pub fn compact_char(self) -> Option<char> {
        let index = self.index();
        if index > MAX_COMPACT_RANK {
            return None;
        }
        let base = if self.is_positive() { b'a' } else { b'A' };
        Some((base + (index - 1) as u8) as char)
    }

    pub fn from_compact_char(ch: char) -> Option<Letter> {
        match ch {
            'a'..='z' => Some(Letter::new(ch as usize - 'a' as usize + 1, true)),
            'A'..='Z' => Some(Letter::new(ch as usize - 'A' as usize + 1, false)),
            _ => None,
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ordinal().cmp(&other.ordinal())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compact_char() {
            Some(ch) => write!(f, "{ch}"),
            None if self.is_positive() => write!(f, "x{}", self.index()),
            None => write!(f, "x{}^-1", self.index()),
        }
    }
}

/// Pushes `letter` onto a freely reduced stack, cancelling against the top.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inverse()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

/// Freely reduces a letter sequence.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    for &l in letters {
        push_reduced(&mut out, l);
    }
    out
}

pub(crate) fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

pub(crate) fn is_cyclically_reduced_slice(letters: &[Letter]) -> bool {
    is_reduced(letters)
        && match (letters.first(), letters.last()) {
            (Some(&f), Some(&l)) => letters.len() == 1 || f != l.inverse(),
            _ => true,
        }
}

/// Number of letters cancelled from each end by cyclic reduction.
#[inline]
pub(crate) fn cyclic_overlap(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut t = 0;
    while 2 * t + 1 < n && letters[t] == letters[n - 1 - t].inverse() {
        t += 1;
    }
    t
}

/// Additive image of a word in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(rank: usize) -> Self {
        ExponentVector(alloc::vec![0; rank])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// gcd of the absolute entries; zero for the zero vector.
    pub fn gcd(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &e| gcd(g, e.unsigned_abs()))
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;

    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        assert_eq!(self.rank(), rhs.rank());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;

    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|e| -e).collect())
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A freely reduced word over the generators of `F_rank`.
///
/// Ordering is lexicographic on letters under the (index, sign) order,
/// after comparing rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

fn check_rank(rank: usize) -> Result<(), WordError> {
    if rank == 0 || rank > MAX_RANK {
        return Err(WordError::RankOutOfRange { rank, max: MAX_RANK });
    }
    Ok(())
}

impl Word {
    pub fn empty(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    /// Builds the freely reduced word from arbitrary letters.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word, WordError> {
        check_rank(rank)?;
        let mut out = Vec::new();
        for l in letters {
            if l.index() > rank {
                return Err(WordError::LetterOutOfRange { index: l.index(), rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    /// Caller guarantees `letters` is freely reduced and within `rank`.
    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(is_reduced(&letters));
        debug_assert!(letters.iter().all(|l| l.index() <= rank));
        Word { rank, letters }
    }

    pub fn generator(rank: usize, index: usize) -> Word {
        assert!(index >= 1 && index <= rank);
        Word { rank, letters: alloc::vec![Letter::generator(index)] }
    }

    pub fn letter(rank: usize, letter: Letter) -> Word {
        assert!(letter.index() <= rank);
        Word { rank, letters: alloc::vec![letter] }
    }

    /// Parses compact (`abAB`) or verbose (`x1 x2^-1 x1^3`) syntax.
    ///
    /// Text containing a digit is read as verbose; `""` and `"1"` are the
    /// empty word.
    pub fn parse(text: &str, rank: usize) -> Result<Word, WordError> {
        check_rank(rank)?;
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty(rank));
        }
        if text.bytes().any(|b| b.is_ascii_digit()) {
            parse_verbose(text, rank)
        } else {
            parse_compact(text, rank)
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    /// `self^exponent`, freely reduced.
    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..exponent.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut out, l);
            }
        }
        Word { rank: self.rank, letters: out }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        is_cyclically_reduced_slice(&self.letters)
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let t = cyclic_overlap(&self.letters);
        let n = self.letters.len();
        (
            Word { rank: self.rank, letters: self.letters[t..n - t].to_vec() },
            Word { rank: self.rank, letters: self.letters[..t].to_vec() },
        )
    }

    /// Length of the cyclic reduction.
    pub fn cyclic_len(&self) -> usize {
        self.letters.len() - 2 * cyclic_overlap(&self.letters)
    }

    /// Conjugation by the first letter: `l·w'` becomes `w'·l` (freely reduced).
    pub fn rotate_by_one(&self) -> Word {
        match self.letters.split_first() {
            None => self.clone(),
            Some((&first, rest)) => {
                let mut out = rest.to_vec();
                push_reduced(&mut out, first);
                Word { rank: self.rank, letters: out }
            }
        }
    }

    /// All distinct cyclic permutations, starting with `self`.
    pub fn rotations(&self) -> Result<Vec<Word>, WordError> {
        if !self.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced);
        }
        let n = self.letters.len();
        let period = smallest_period(&self.letters);
        Ok((0..period.max(usize::from(n == 0)))
            .map(|shift| {
                let mut letters = Vec::with_capacity(n);
                letters.extend_from_slice(&self.letters[shift..]);
                letters.extend_from_slice(&self.letters[..shift]);
                Word { rank: self.rank, letters }
            })
            .collect())
    }

    pub fn exponent_vector(&self) -> ExponentVector {
        let mut v = ExponentVector::zero(self.rank);
        for l in &self.letters {
            v.0[l.index() - 1] += i64::from(l.sign());
        }
        v
    }

    /// Serialised (index, sign) pairs: big-endian `u16` index then `0` for
    /// a generator, `1` for an inverse. Byte order agrees with [`Ord`].
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(3 * self.letters.len());
        for l in &self.letters {
            key.extend_from_slice(&(l.index() as u16).to_be_bytes());
            key.push(u8::from(!l.is_positive()));
        }
        key
    }

    /// Compact form, or `None` when the rank exceeds 26. Empty word is `""`.
    pub fn to_compact(&self) -> Option<String> {
        if self.rank > MAX_COMPACT_RANK {
            return None;
        }
        Some(self.letters.iter().map(|l| l.compact_char().unwrap()).collect())
    }

    /// Verbose form with runs collapsed into exponents. Empty word is `"1"`.
    pub fn to_verbose(&self) -> String {
        use core::fmt::Write;
        if self.letters.is_empty() {
            return String::from("1");
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let exp = (j - i) as i64 * i64::from(l.sign());
            if !out.is_empty() {
                out.push(' ');
            }
            if exp == 1 {
                write!(out, "x{}", l.index()).unwrap();
            } else {
                write!(out, "x{}^{}", l.index(), exp).unwrap();
            }
            i = j;
        }
        out
    }
}

pub(crate) fn smallest_period(letters: &[Letter]) -> usize {
    let n = letters.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| letters[i] == letters[i - p]))
        .unwrap_or(0)
}

fn parse_compact(text: &str, rank: usize) -> Result<Word, WordError> {
    if rank > MAX_COMPACT_RANK {
        return Err(WordError::RankOutOfRange { rank, max: MAX_COMPACT_RANK });
    }
    let mut letters = Vec::with_capacity(text.len());
    for (position, ch) in text.chars().enumerate() {
        match Letter::from_compact_char(ch) {
            Some(l) if l.index() <= rank => push_reduced(&mut letters, l),
            _ => return Err(WordError::InvalidChar { ch, position, rank }),
        }
    }
    Ok(Word { rank, letters })
}

fn parse_verbose(text: &str, rank: usize) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        if token == "1" {
            continue;
        }
        let malformed = || WordError::MalformedToken { token: token.into() };
        let body = token.strip_prefix('x').ok_or_else(malformed)?;
        let (index_text, exponent_text) = match body.split_once('^') {
            Some((i, e)) => (i, Some(e)),
            None => (body, None),
        };
        if index_text.is_empty() || !index_text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let index: usize = index_text.parse().map_err(|_| malformed())?;
        if index == 0 {
            return Err(malformed());
        }
        if index > rank {
            return Err(WordError::LetterOutOfRange { index, rank });
        }
        let exponent = match exponent_text {
            None => 1,
            Some(e) => match e.parse::<i64>() {
                Ok(v) if v != 0 && v.abs() <= MAX_VERBOSE_EXPONENT => v,
                _ => return Err(WordError::MalformedExponent { token: token.into() }),
            },
        };
        let letter = Letter::new(index, exponent > 0);
        for _ in 0..exponent.unsigned_abs() {
            push_reduced(&mut letters, letter);
        }
    }
    Ok(Word { rank, letters })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_compact() {
            Some(s) if s.is_empty() => f.write_str("1"),
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.to_verbose()),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
