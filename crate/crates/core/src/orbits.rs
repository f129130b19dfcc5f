//! Equal-length automorphic images, equivalence with certificates, image
//! spheres, and forward orbits under a single endomorphism.
//!
//! The set `A(u)` of automorphic images of a minimal word `u` with length
//! `|u|` is explored breadth-first from `u`. Vertices are cyclically reduced
//! words of that length; a vertex `w` is joined to its rotation by one and
//! to the cyclic reduction of `m(w)` for every Whitehead move `m` whenever
//! the length does not change. Every discovered vertex records the edge it
//! was reached by, so the search leaves a spanning tree from which an
//! explicit automorphism can be read off for each member. Peak reduction
//! makes the component equal to all of `A(u)`, and the cost is linear in
//! `|A(u)|` for a fixed rank.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::DefaultHashBuilder;

use crate::endos::{EndoError, GenMap, Order, DEFAULT_ORDER_BOUND};
use crate::whitehead::{invert_trace, minimize_with, trace_genmap, Minimization, MoveSet, Step};
use crate::words::{cyclic_overlap, Letter, Word, WordError};

/// Default member cap for searches.
pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("search exceeded the cap of {cap} words ({visited} visited)")]
    CapExceeded { cap: usize, visited: usize },
    #[error("word is not a member of the peak set")]
    NotMember,
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("word is not of minimal length in its automorphic orbit")]
    NotMinimal,
    #[error("map is not an automorphism of finite order")]
    NotFiniteOrder,
    #[error("no realizer found with exponents up to {max_exp}")]
    ExhaustedSearch { max_exp: u32 },
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone)]
enum Edge {
    Root,
    Rotate,
    /// Index into the [`MoveSet`], plus the conjugator stripped by cyclic
    /// reduction of the image.
    Move { index: u32, fixup: Option<Box<[Letter]>> },
}

#[derive(Debug, Clone)]
struct Node {
    word: Box<[Letter]>,
    parent: u32,
    edge: Edge,
}

/// Breadth-first spanning tree over equal-length cyclically reduced words.
#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl Tree {
    fn new(root: Box<[Letter]>) -> Tree {
        let mut tree = Tree { nodes: Vec::new(), table: HashTable::new(), hasher: DefaultHashBuilder::default() };
        tree.insert(root, 0, Edge::Root);
        tree
    }

    fn find(&self, word: &[Letter]) -> Option<u32> {
        let hash = self.hasher.hash_one(word);
        self.table.find(hash, |&i| &*self.nodes[i as usize].word == word).copied()
    }

    /// Inserts if absent; returns the index when the word is new.
    fn insert(&mut self, word: Box<[Letter]>, parent: u32, edge: Edge) -> Option<u32> {
        let hash = self.hasher.hash_one(&*word);
        let Tree { nodes, table, hasher } = self;
        match table.entry(
            hash,
            |&i| nodes[i as usize].word == word,
            |&i| hasher.hash_one(&*nodes[i as usize].word),
        ) {
            Entry::Occupied(_) => None,
            Entry::Vacant(slot) => {
                let index = nodes.len() as u32;
                slot.insert(index);
                nodes.push(Node { word, parent, edge });
                Some(index)
            }
        }
    }

    fn path_steps(&self, moves: &MoveSet, rank: usize, mut index: u32) -> Vec<Step> {
        let mut steps = Vec::new();
        loop {
            let node = &self.nodes[index as usize];
            match &node.edge {
                Edge::Root => break,
                Edge::Rotate => steps.push(Step::Rotate),
                Edge::Move { index: m, fixup } => {
                    if let Some(g) = fixup {
                        steps.push(Step::Conjugate(Word::from_reduced(rank, g.to_vec())));
                    }
                    steps.push(Step::Move(moves.get(*m as usize).clone()));
                }
            }
            index = node.parent;
        }
        steps.reverse();
        steps
    }
}

enum Explored {
    Complete(Tree),
    Found(Tree, u32),
}

fn explore(moves: &MoveSet, base: &[Letter], cap: usize, target: Option<&[Letter]>) -> Result<Explored, OrbitError> {
    let len = base.len();
    let mut tree = Tree::new(base.into());
    if target == Some(base) {
        return Ok(Explored::Found(tree, 0));
    }
    let mut buf = Vec::with_capacity(3 * len + 2);
    let mut next = 0usize;
    while next < tree.nodes.len() {
        let parent = next as u32;
        let word = tree.nodes[next].word.clone();
        next += 1;

        let discovered = |tree: &mut Tree, candidate: Box<[Letter]>, edge: Edge| -> Result<Option<u32>, OrbitError> {
            let Some(index) = tree.insert(candidate, parent, edge) else {
                return Ok(None);
            };
            if tree.nodes.len() > cap {
                return Err(OrbitError::CapExceeded { cap, visited: tree.nodes.len() });
            }
            Ok(target.filter(|t| **t == *tree.nodes[index as usize].word).map(|_| index))
        };

        if len > 1 {
            let mut rotated = Vec::with_capacity(len);
            rotated.extend_from_slice(&word[1..]);
            rotated.push(word[0]);
            if let Some(hit) = discovered(&mut tree, rotated.into(), Edge::Rotate)? {
                return Ok(Explored::Found(tree, hit));
            }
        }
        for m in 0..moves.len() {
            moves.apply_into(m, &word, &mut buf);
            let t = cyclic_overlap(&buf);
            if buf.len() - 2 * t != len {
                continue;
            }
            let core = &buf[t..buf.len() - t];
            if tree.find(core).is_some() {
                continue;
            }
            let fixup = (t > 0).then(|| Box::from(&buf[..t]));
            let edge = Edge::Move { index: m as u32, fixup };
            if let Some(hit) = discovered(&mut tree, core.into(), edge)? {
                return Ok(Explored::Found(tree, hit));
            }
        }
    }
    Ok(Explored::Complete(tree))
}

/// The set `A(u)` with a spanning tree of certificates.
#[derive(Debug, Clone)]
pub struct PeakSet {
    rank: usize,
    moves: MoveSet,
    minimization: Minimization,
    tree: Tree,
}

/// Computes `A(min(u))`; `u` is minimised first.
pub fn peak_set(u: &Word, cap: usize) -> Result<PeakSet, OrbitError> {
    peak_set_with(&MoveSet::new(u.rank()), u, cap)
}

pub fn peak_set_with(moves: &MoveSet, u: &Word, cap: usize) -> Result<PeakSet, OrbitError> {
    if moves.rank() != u.rank() {
        return Err(OrbitError::RankMismatch { left: moves.rank(), right: u.rank() });
    }
    let minimization = minimize_with(moves, u);
    let Explored::Complete(tree) = explore(moves, minimization.word.letters(), cap, None)? else {
        unreachable!("no target given")
    };
    Ok(PeakSet { rank: u.rank(), moves: moves.clone(), minimization, tree })
}

impl PeakSet {
    pub fn base(&self) -> &Word {
        &self.minimization.word
    }

    /// How the original input was taken to [`PeakSet::base`].
    pub fn minimization(&self) -> &Minimization {
        &self.minimization
    }

    pub fn len(&self) -> usize {
        self.tree.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.nodes.is_empty()
    }

    pub fn contains(&self, v: &Word) -> bool {
        v.rank() == self.rank && self.tree.find(v.letters()).is_some()
    }

    /// Members in discovery order.
    pub fn members(&self) -> impl Iterator<Item = Word> + '_ {
        self.tree.nodes.iter().map(|n| Word::from_reduced(self.rank, n.word.to_vec()))
    }

    pub fn sorted_members(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self.members().collect();
        out.sort_unstable();
        out
    }

    /// Lexicographically least member under the (index, sign) letter order.
    pub fn canonical_representative(&self) -> Word {
        let least = self.tree.nodes.iter().map(|n| &n.word).min().expect("base is a member");
        Word::from_reduced(self.rank, least.to_vec())
    }

    fn index_of(&self, v: &Word) -> Result<u32, OrbitError> {
        if v.rank() != self.rank {
            return Err(OrbitError::RankMismatch { left: self.rank, right: v.rank() });
        }
        self.tree.find(v.letters()).ok_or(OrbitError::NotMember)
    }

    /// Edge labels along the tree path from the base to `v`.
    pub fn trace(&self, v: &Word) -> Result<Vec<Step>, OrbitError> {
        let index = self.index_of(v)?;
        Ok(self.tree.path_steps(&self.moves, self.rank, index))
    }

    /// An automorphism taking the base exactly to `v`.
    pub fn witness(&self, v: &Word) -> Result<GenMap, OrbitError> {
        Ok(trace_genmap(self.base(), &self.trace(v)?))
    }

    /// Steps from the original input through the base to `v`.
    pub fn trace_from_input(&self, v: &Word) -> Result<Vec<Step>, OrbitError> {
        let mut steps = self.minimization.steps.clone();
        steps.extend(self.trace(v)?);
        Ok(steps)
    }
}

/// A verified route from `u` to `v`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub steps: Vec<Step>,
    /// `witness.apply(u) == v` exactly.
    pub witness: GenMap,
    pub visited: usize,
}

#[derive(Debug, Clone)]
pub enum Equivalence {
    Equivalent(Certificate),
    NotEquivalent { visited: usize },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Equivalence::Equivalent(c) => Some(c),
            Equivalence::NotEquivalent { .. } => None,
        }
    }
}

/// Decides whether some automorphism maps `u` to `v`, searching `A(min u)`
/// until `min v` turns up.
pub fn is_equivalent(u: &Word, v: &Word, cap: usize) -> Result<Equivalence, OrbitError> {
    if u.rank() != v.rank() {
        return Err(OrbitError::RankMismatch { left: u.rank(), right: v.rank() });
    }
    let moves = MoveSet::new(u.rank());
    let mu = minimize_with(&moves, u);
    let mv = minimize_with(&moves, v);
    if mu.word.len() != mv.word.len() {
        return Ok(Equivalence::NotEquivalent { visited: 0 });
    }
    let (tree, hit) = match explore(&moves, mu.word.letters(), cap, Some(mv.word.letters()))? {
        Explored::Complete(tree) => return Ok(Equivalence::NotEquivalent { visited: tree.nodes.len() }),
        Explored::Found(tree, hit) => (tree, hit),
    };
    let mut steps = mu.steps;
    steps.extend(tree.path_steps(&moves, u.rank(), hit));
    steps.extend(invert_trace(v, &mv.steps));
    let witness = trace_genmap(u, &steps);
    Ok(Equivalence::Equivalent(Certificate { steps, witness, visited: tree.nodes.len() }))
}

/// All automorphic images of the minimal word `u` of length `|u| + slack`,
/// in sorted order.
///
/// Breadth-first over plain reduced words of length at most `|u| + slack`,
/// joined by single Whitehead moves; inner automorphisms by one letter are
/// themselves Type II moves, so no rotation edges are needed.
pub fn image_sphere(u: &Word, slack: usize, cap: usize) -> Result<Vec<Word>, OrbitError> {
    let moves = MoveSet::new(u.rank());
    if !u.is_cyclically_reduced() || minimize_with(&moves, u).word.len() != u.len() {
        return Err(OrbitError::NotMinimal);
    }
    let limit = u.len() + slack;
    let mut seen: hashbrown::HashSet<Box<[Letter]>> = hashbrown::HashSet::new();
    let mut queue: Vec<Box<[Letter]>> = Vec::new();
    seen.insert(u.letters().into());
    queue.push(u.letters().into());
    let mut buf = Vec::new();
    let mut next = 0;
    while next < queue.len() {
        let word = queue[next].clone();
        next += 1;
        for m in 0..moves.len() {
            moves.apply_into(m, &word, &mut buf);
            if buf.len() > limit || seen.contains(&buf[..]) {
                continue;
            }
            let image: Box<[Letter]> = buf.as_slice().into();
            seen.insert(image.clone());
            queue.push(image);
            if queue.len() > cap {
                return Err(OrbitError::CapExceeded { cap, visited: queue.len() });
            }
        }
    }
    let mut sphere: Vec<Word> = queue
        .into_iter()
        .filter(|w| w.len() == limit)
        .map(|w| Word::from_reduced(u.rank(), w.into_vec()))
        .collect();
    sphere.sort_unstable();
    Ok(sphere)
}

/// Forward orbit `u, f(u), f²(u), …` up to the first repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTrace {
    pub words: Vec<Word>,
    /// Index at which the cycle starts (words before it are never revisited).
    pub tail_length: usize,
    /// Zero when the iteration was truncated before a repeat.
    pub cycle_length: usize,
}

impl OrbitTrace {
    pub fn cardinality(&self) -> usize {
        self.words.len()
    }

    pub fn is_closed(&self) -> bool {
        self.cycle_length > 0
    }
}

/// Iterates `f` from `u` (exponent 0 included) for at most `max_steps`
/// applications. Any endomorphism is allowed.
pub fn orbit_under_map(f: &GenMap, u: &Word, max_steps: usize) -> Result<OrbitTrace, OrbitError> {
    if f.rank() != u.rank() {
        return Err(OrbitError::RankMismatch { left: f.rank(), right: u.rank() });
    }
    let mut words = alloc::vec![u.clone()];
    let mut seen: hashbrown::HashMap<Word, usize> = hashbrown::HashMap::new();
    seen.insert(u.clone(), 0);
    for _ in 0..max_steps {
        let image = f.apply(words.last().unwrap())?;
        if let Some(&start) = seen.get(&image) {
            let cycle_length = words.len() - start;
            return Ok(OrbitTrace { words, tail_length: start, cycle_length });
        }
        seen.insert(image.clone(), words.len());
        words.push(image);
    }
    let tail_length = words.len();
    Ok(OrbitTrace { words, tail_length, cycle_length: 0 })
}

/// A word whose orbit under an order-`order` automorphism has exactly
/// `order` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realizer {
    pub word: Word,
    pub order: u64,
}

/// Searches `x_1^M x_2^{M+1} ⋯ x_n^{M+n−1}` for `M = 1..=max_exp` until the
/// orbit under `f` has `order(f)` elements. For large enough exponents a
/// non-identity automorphism moves every such word, so the search succeeds
/// once `max_exp` is large enough.
pub fn find_orbit_realizer(f: &GenMap, max_exp: u32, max_steps: usize) -> Result<Realizer, OrbitError> {
    let order = match f.order(DEFAULT_ORDER_BOUND) {
        Ok(Order::Finite(k)) => k,
        Ok(Order::Unbounded) | Err(EndoError::NotAutomorphism) => return Err(OrbitError::NotFiniteOrder),
        Err(e) => return Err(e.into()),
    };
    let rank = f.rank();
    if order == 1 {
        return Ok(Realizer { word: Word::generator(rank, 1), order });
    }
    for m in 1..=max_exp {
        let letters = (1..=rank).flat_map(|i| {
            core::iter::repeat_n(Letter::generator(i), m as usize + i - 1)
        });
        let word = Word::new(rank, letters)?;
        let trace = orbit_under_map(f, &word, max_steps)?;
        if trace.is_closed() && trace.cardinality() as u64 == order {
            return Ok(Realizer { word, order });
        }
    }
    Err(OrbitError::ExhaustedSearch { max_exp })
}
