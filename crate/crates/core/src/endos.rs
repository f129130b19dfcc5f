//! Endomorphisms of `F_n` given by generator images.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::words::{push_reduced, Letter, Word, WordError};

/// Bound used by [`GenMap::order`] when none is given.
pub const DEFAULT_ORDER_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EndoError {
    #[error("rank mismatch: map has rank {map}, operand has rank {operand}")]
    RankMismatch { map: usize, operand: usize },
    #[error("expected {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An endomorphism of `F_rank`: `images[i]` is the image of `x_{i+1}`.
///
/// Equality is component-wise equality of the (reduced) images.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GenMap {
    rank: usize,
    images: Vec<Word>,
}

impl GenMap {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<GenMap, EndoError> {
        if images.len() != rank {
            return Err(EndoError::ImageCount { expected: rank, got: images.len() });
        }
        if let Some(w) = images.iter().find(|w| w.rank() != rank) {
            return Err(EndoError::RankMismatch { map: rank, operand: w.rank() });
        }
        Ok(GenMap { rank, images })
    }

    /// Parses one image per generator in either word syntax.
    pub fn parse(rank: usize, images: &[&str]) -> Result<GenMap, EndoError> {
        let images = images
            .iter()
            .map(|s| Word::parse(s, rank))
            .collect::<Result<Vec<_>, _>>()?;
        GenMap::new(rank, images)
    }

    pub fn identity(rank: usize) -> GenMap {
        GenMap { rank, images: (1..=rank).map(|i| Word::generator(rank, i)).collect() }
    }

    /// The inner automorphism `x ↦ g⁻¹ x g`.
    pub fn conjugation(g: &Word) -> GenMap {
        let rank = g.rank();
        let gi = g.inverse();
        let images = (1..=rank)
            .map(|i| {
                let mut out = gi.letters().to_vec();
                push_reduced(&mut out, Letter::generator(i));
                for &l in g.letters() {
                    push_reduced(&mut out, l);
                }
                Word::from_reduced(rank, out)
            })
            .collect();
        GenMap { rank, images }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, index: usize) -> &Word {
        &self.images[index - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::generator(i + 1)])
    }

    /// Substitutes images into `letters` and freely reduces into `out`.
    pub(crate) fn apply_into(&self, letters: &[Letter], out: &mut Vec<Letter>) {
        out.clear();
        for &l in letters {
            let image = self.images[l.index() - 1].letters();
            if l.is_positive() {
                for &m in image {
                    push_reduced(out, m);
                }
            } else {
                for &m in image.iter().rev() {
                    push_reduced(out, m.inverse());
                }
            }
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, EndoError> {
        if w.rank() != self.rank {
            return Err(EndoError::RankMismatch { map: self.rank, operand: w.rank() });
        }
        let mut out = Vec::new();
        self.apply_into(w.letters(), &mut out);
        Ok(Word::from_reduced(self.rank, out))
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &GenMap) -> Result<GenMap, EndoError> {
        if inner.rank != self.rank {
            return Err(EndoError::RankMismatch { map: self.rank, operand: inner.rank });
        }
        let mut buf = Vec::new();
        let images = inner
            .images
            .iter()
            .map(|w| {
                self.apply_into(w.letters(), &mut buf);
                Word::from_reduced(self.rank, buf.clone())
            })
            .collect();
        Ok(GenMap { rank: self.rank, images })
    }

    pub fn pow(&self, k: u64) -> GenMap {
        let mut acc = GenMap::identity(self.rank);
        for _ in 0..k {
            acc = self.compose(&acc).expect("equal ranks");
        }
        acc
    }

    pub fn abelianization(&self) -> AbelMatrix {
        AbelMatrix {
            rows: self.images.iter().map(|w| w.exponent_vector().0).collect(),
        }
    }

    /// Decides whether the images form a basis of `F_n`.
    ///
    /// Rejects early on an empty image or a non-unimodular abelianization,
    /// then runs greedy Nielsen reduction. If reduction stalls short of the
    /// generator tuple, Stallings folding of the image tuple settles it.
    pub fn basis_test(&self) -> BasisTest {
        let mut tuple: Vec<Vec<Letter>> = self.images.iter().map(|w| w.letters().to_vec()).collect();
        let unimodular = matches!(self.abelianization().determinant(), Some(1 | -1));
        if tuple.iter().any(|w| w.is_empty()) || !unimodular {
            return self.finish_basis_test(tuple, false);
        }
        nielsen_reduce(&mut tuple);
        let verdict = is_generator_tuple(&tuple) || generates_whole_group(self.rank, &tuple);
        self.finish_basis_test(tuple, verdict)
    }

    fn finish_basis_test(&self, tuple: Vec<Vec<Letter>>, is_automorphism: bool) -> BasisTest {
        BasisTest {
            is_automorphism,
            reduced: tuple.into_iter().map(|l| Word::from_reduced(self.rank, l)).collect(),
        }
    }

    pub fn is_automorphism(&self) -> bool {
        self.basis_test().is_automorphism
    }

    /// Smallest `k ≤ bound` with `self^k = id`, for automorphisms.
    ///
    /// The abelianization's order `m` is found first (overflow of an
    /// entry means infinite order). Since `IA_n` is torsion-free, `self`
    /// then has finite order iff `self^m = id`, in which case the order is `m`.
    pub fn order(&self, bound: u64) -> Result<Order, EndoError> {
        if !self.is_automorphism() {
            return Err(EndoError::NotAutomorphism);
        }
        let Some(m) = self.abelianization().order(bound) else {
            return Ok(Order::Unbounded);
        };
        if self.pow(m).is_identity() {
            Ok(Order::Finite(m))
        } else {
            Ok(Order::Unbounded)
        }
    }
}

impl fmt::Display for GenMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{} -> {}", i + 1, w)?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GenMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenMap{self}")
    }
}

/// Outcome of [`GenMap::basis_test`], with the tuple reduction stopped at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisTest {
    pub is_automorphism: bool,
    pub reduced: Vec<Word>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Unbounded,
}

fn try_product(a: &[Letter], b: &[Letter], invert_b: bool, b_first: bool) -> Vec<Letter> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let push_b = |out: &mut Vec<Letter>| {
        if invert_b {
            for &l in b.iter().rev() {
                push_reduced(out, l.inverse());
            }
        } else {
            for &l in b {
                push_reduced(out, l);
            }
        }
    };
    if b_first {
        push_b(&mut out);
        for &l in a {
            push_reduced(&mut out, l);
        }
    } else {
        out.extend_from_slice(a);
        push_b(&mut out);
    }
    out
}

/// Greedy length-decreasing Nielsen reduction. Pairs `(i, j)` are scanned
/// lexicographically and the first strictly shortening product among
/// `w_i w_j`, `w_i w_j⁻¹`, `w_j w_i`, `w_j⁻¹ w_i` replaces `w_i`.
fn nielsen_reduce(tuple: &mut [Vec<Letter>]) {
    let n = tuple.len();
    'outer: loop {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for (invert, b_first) in [(false, false), (true, false), (false, true), (true, true)] {
                    let candidate = try_product(&tuple[i], &tuple[j], invert, b_first);
                    if candidate.len() < tuple[i].len() {
                        tuple[i] = candidate;
                        if tuple[i].is_empty() {
                            return;
                        }
                        continue 'outer;
                    }
                }
            }
        }
        return;
    }
}

fn is_generator_tuple(tuple: &[Vec<Letter>]) -> bool {
    let mut seen = vec![false; tuple.len()];
    tuple.iter().all(|w| {
        w.len() == 1 && {
            let i = w[0].index() - 1;
            i < seen.len() && !core::mem::replace(&mut seen[i], true)
        }
    })
}

/// Stallings folding of the bouquet of image loops; the subgroup is all of
/// `F_rank` iff the folded graph is the rose with one loop per generator.
fn generates_whole_group(rank: usize, tuple: &[Vec<Letter>]) -> bool {
    // Edges stored as (source, generator index, target).
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut vertices = 1;
    for w in tuple {
        let mut current = 0;
        for (pos, &l) in w.iter().enumerate() {
            let next = if pos + 1 == w.len() {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            if l.is_positive() {
                edges.push((current, l.index(), next));
            } else {
                edges.push((next, l.index(), current));
            }
            current = next;
        }
    }
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    loop {
        let mut changed = false;
        let mut outgoing = hashbrown::HashMap::new();
        let mut incoming = hashbrown::HashMap::new();
        for &(s, g, t) in &edges {
            let (s, t) = (find(&mut parent, s), find(&mut parent, t));
            if let Some(&t2) = outgoing.get(&(s, g)) {
                let t2 = find(&mut parent, t2);
                if t2 != t {
                    parent[t2] = t;
                    changed = true;
                }
            } else {
                outgoing.insert((s, g), t);
            }
            if let Some(&s2) = incoming.get(&(t, g)) {
                let s2 = find(&mut parent, s2);
                let s = find(&mut parent, s);
                if s2 != s {
                    parent[s2] = s;
                    changed = true;
                }
            } else {
                incoming.insert((t, g), s);
            }
        }
        if !changed {
            break;
        }
    }
    let root = find(&mut parent, 0);
    let mut loops = vec![false; rank + 1];
    for &(s, g, t) in &edges {
        let (s, t) = (find(&mut parent, s), find(&mut parent, t));
        if s != root || t != root {
            return false;
        }
        loops[g] = true;
    }
    loops[1..].iter().all(|&b| b)
}

/// Integer matrix of the induced map on `Z^n`: row `i` is the exponent
/// vector of the image of `x_{i+1}`, so `exp(f(w)) = exp(w) · M(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl AbelMatrix {
    pub fn identity(n: usize) -> AbelMatrix {
        AbelMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn checked_mul(&self, rhs: &AbelMatrix) -> Option<AbelMatrix> {
        let n = self.dim();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = 0i64;
                for k in 0..n {
                    acc = acc.checked_add(self.rows[i][k].checked_mul(rhs.rows[k][j])?)?;
                }
                *cell = acc;
            }
        }
        Some(AbelMatrix { rows })
    }

    /// Panics on overflow.
    pub fn mul(&self, rhs: &AbelMatrix) -> AbelMatrix {
        self.checked_mul(rhs).expect("matrix product overflow")
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[i64]) -> Vec<i64> {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|k| v[k] * self.rows[k][j]).sum()).collect()
    }

    /// Fraction-free (Bareiss) determinant; `None` on overflow.
    pub fn determinant(&self) -> Option<i64> {
        let n = self.dim();
        if n == 0 {
            return Some(1);
        }
        let mut a: Vec<Vec<i128>> = self.rows.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                    return Some(0);
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).ok()
    }

    /// Multiplicative order up to `bound`, or `None`.
    pub fn order(&self, bound: u64) -> Option<u64> {
        let id = AbelMatrix::identity(self.dim());
        let mut power = self.clone();
        for k in 1..=bound {
            if power == id {
                return Some(k);
            }
            power = power.checked_mul(self)?;
        }
        None
    }
}

/// Whether `Aut(F_n)` contains an element of order `k`: with
/// `k = Π p_i^{a_i}`, the criterion is `Σ (p_i^{a_i} − p_i^{a_i − 1}) ≤ n`.
pub fn torsion_order_realizable(k: u64, n: u64) -> bool {
    assert!(k >= 1, "order must be positive");
    prime_power_totient_sum(k) <= n
}

/// `Σ (p^a − p^{a−1})` over the prime-power factors of `k`; 0 for `k = 1`.
pub fn prime_power_totient_sum(k: u64) -> u64 {
    factorize(k)
        .into_iter()
        .map(|(p, a)| {
            let pa = p.pow(a);
            pa - pa / p
        })
        .sum()
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= k {
        if k.is_multiple_of(p) {
            let mut a = 0;
            while k.is_multiple_of(p) {
                k /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(rank: usize, images: &[&str]) -> GenMap {
        GenMap::parse(rank, images).unwrap()
    }

    fn w(s: &str, rank: usize) -> Word {
        Word::parse(s, rank).unwrap()
    }

    fn alpha() -> GenMap {
        map(2, &["ab", "b"])
    }

    fn sims() -> GenMap {
        map(3, &["Bc", "a", ""])
    }

    #[test]
    fn apply_examples() {
        assert_eq!(alpha().apply(&w("a", 2)).unwrap(), w("ab", 2));
        assert_eq!(GenMap::identity(2).apply(&w("abAAB", 2)).unwrap(), w("abAAB", 2));
        assert_eq!(sims().apply(&w("abc", 3)).unwrap(), w("Bca", 3));
        assert!(matches!(alpha().apply(&w("a", 3)), Err(EndoError::RankMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let f = alpha();
        assert_eq!(f.compose(&GenMap::identity(2)).unwrap(), f);
        let sigma_x = map(2, &["A", "b"]);
        assert!(sigma_x.compose(&sigma_x).unwrap().is_identity());
        assert_eq!(f.compose(&f).unwrap(), map(2, &["abb", "b"]));
        // order convention: compose(f, g) applies g first
        let pi = map(2, &["b", "a"]);
        let w0 = w("a", 2);
        assert_eq!(
            alpha().compose(&pi).unwrap().apply(&w0).unwrap(),
            alpha().apply(&pi.apply(&w0).unwrap()).unwrap()
        );
        assert!(f.compose(&GenMap::identity(3)).is_err());
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(alpha().abelianization().rows, vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(GenMap::identity(3).abelianization(), AbelMatrix::identity(3));
        let m = sims().abelianization();
        assert_eq!(m.rows, vec![vec![0, -1, 1], vec![1, 0, 0], vec![0, 0, 0]]);
        assert_eq!(m.determinant(), Some(0));
    }

    #[test]
    fn determinant_handles_pivoting() {
        let m = AbelMatrix { rows: vec![vec![0, 1], vec![1, 0]] };
        assert_eq!(m.determinant(), Some(-1));
        let m = AbelMatrix { rows: vec![vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]] };
        assert_eq!(m.determinant(), Some(1));
    }

    #[test]
    fn automorphism_examples() {
        assert!(alpha().is_automorphism());
        let test = alpha().basis_test();
        assert_eq!(test.reduced, vec![w("a", 2), w("b", 2)]);
        assert!(!sims().is_automorphism());
        assert!(GenMap::identity(3).is_automorphism());
        // unimodular abelianization but not a basis
        assert!(!map(2, &["abaBA", "b"]).is_automorphism());
        assert!(!map(2, &["abAB", "b"]).is_automorphism());
    }

    #[test]
    fn folding_agrees_on_small_cases() {
        assert!(generates_whole_group(2, &[w("ab", 2).into_letters(), w("b", 2).into_letters()]));
        assert!(!generates_whole_group(2, &[w("aba", 2).into_letters(), w("b", 2).into_letters()]));
        assert!(generates_whole_group(2, &[w("abA", 2).into_letters(), w("a", 2).into_letters()]));
        assert!(!generates_whole_group(2, &[w("abA", 2).into_letters(), w("b", 2).into_letters()]));
    }

    #[test]
    fn order_examples() {
        assert_eq!(map(2, &["b", "a"]).order(100).unwrap(), Order::Finite(2));
        assert_eq!(GenMap::identity(2).order(100).unwrap(), Order::Finite(1));
        assert_eq!(alpha().order(100).unwrap(), Order::Unbounded);
        assert_eq!(alpha().order(DEFAULT_ORDER_BOUND).unwrap(), Order::Unbounded);
        assert_eq!(sims().order(10), Err(EndoError::NotAutomorphism));
        // inner automorphism: trivial abelianization, infinite order
        let inner = GenMap::conjugation(&w("a", 2));
        assert_eq!(inner.order(100).unwrap(), Order::Unbounded);
        // x -> y, y -> x^-1 has order 4
        assert_eq!(map(2, &["b", "A"]).order(100).unwrap(), Order::Finite(4));
    }

    #[test]
    fn torsion_examples() {
        assert!(torsion_order_realizable(15, 6));
        assert!(!torsion_order_realizable(15, 5));
        for n in 1..10 {
            assert!(torsion_order_realizable(1, n));
        }
        assert!(torsion_order_realizable(4, 2));
        assert!(!torsion_order_realizable(8, 3));
        assert_eq!(prime_power_totient_sum(15), 6);
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn conjugation_map() {
        let g = w("ab", 2);
        let c = GenMap::conjugation(&g);
        assert_eq!(c.apply(&w("a", 2)).unwrap(), w("BAaab", 2));
        assert_eq!(c.apply(&g).unwrap(), g);
    }
}
