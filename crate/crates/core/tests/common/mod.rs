//! Brute-force reference implementations used as test oracles.
//!
//! Words are plain `Vec<i32>` (`+i` = x_i, `-i` = x_i^-1) and Whitehead
//! moves are rebuilt here from their definition, independent of the
//! library's move tables and search code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use autorbit::{Letter, Word};

pub type Raw = Vec<i32>;

pub fn to_raw(w: &Word) -> Raw {
    w.letters()
        .iter()
        .map(|l| if l.is_positive() { l.index() as i32 } else { -(l.index() as i32) })
        .collect()
}

pub fn from_raw(rank: usize, raw: &[i32]) -> Word {
    Word::new(rank, raw.iter().map(|&x| Letter::new(x.unsigned_abs() as usize, x > 0))).unwrap()
}

pub fn reduce(letters: impl IntoIterator<Item = i32>) -> Raw {
    let mut out: Raw = Vec::new();
    for x in letters {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_core(w: &[i32]) -> Raw {
    let mut s = 0;
    let mut e = w.len();
    while e - s >= 2 && w[s] == -w[e - 1] {
        s += 1;
        e -= 1;
    }
    w[s..e].to_vec()
}

/// Generator images of one move.
pub type Images = Vec<Raw>;

pub fn apply(images: &Images, w: &[i32]) -> Raw {
    reduce(w.iter().flat_map(|&x| {
        let img = &images[x.unsigned_abs() as usize - 1];
        if x > 0 {
            img.clone()
        } else {
            img.iter().rev().map(|y| -y).collect()
        }
    }))
}

fn signed_permutations(n: usize) -> Vec<Images> {
    fn rec(n: usize, used: &mut Vec<bool>, cur: &mut Vec<i32>, out: &mut Vec<Images>) {
        if cur.len() == n {
            out.push(cur.iter().map(|&x| vec![x]).collect());
            return;
        }
        for g in 1..=n {
            if used[g] {
                continue;
            }
            used[g] = true;
            for s in [1, -1] {
                cur.push(s * g as i32);
                rec(n, used, cur, out);
                cur.pop();
            }
            used[g] = false;
        }
    }
    let mut out = Vec::new();
    rec(n, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
    out
}

fn type_two(n: usize) -> Vec<Images> {
    let letters: Vec<i32> = (1..=n as i32).flat_map(|g| [g, -g]).collect();
    let mut out = Vec::new();
    for &a in &letters {
        for mask in 0u32..(1 << letters.len()) {
            let set: BTreeSet<i32> = letters
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &l)| l)
                .collect();
            if !set.contains(&a) || set.contains(&-a) || set.len() == 1 {
                continue;
            }
            let images = (1..=n as i32)
                .map(|x| {
                    if x == a.abs() {
                        return vec![x];
                    }
                    let mut img = Vec::new();
                    if set.contains(&-x) {
                        img.push(-a);
                    }
                    img.push(x);
                    if set.contains(&x) {
                        img.push(a);
                    }
                    img
                })
                .collect();
            out.push(images);
        }
    }
    out
}

/// Every elementary Whitehead automorphism of rank `n` (both types).
pub fn all_moves(n: usize) -> Vec<Images> {
    let mut out = signed_permutations(n);
    out.extend(type_two(n));
    out
}

pub fn type_two_moves(n: usize) -> Vec<Images> {
    type_two(n)
}

/// Minimal cyclic length by oracle descent.
pub fn min_cyclic_length(w: &[i32], n: usize) -> usize {
    descend(w, n).len()
}

pub fn all_reduced_words(n: usize, len: usize) -> Vec<Raw> {
    let mut words: Vec<Raw> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            for g in 1..=n as i32 {
                for x in [g, -g] {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
        }
        words = next;
    }
    words
}

pub fn all_cyclically_reduced_words(n: usize, len: usize) -> Vec<Raw> {
    all_reduced_words(n, len)
        .into_iter()
        .filter(|w| w.len() < 2 || w[0] != -w[w.len() - 1])
        .collect()
}

/// The full equal-length graph: every cyclically reduced word of length
/// `len` is a vertex, joined to its rotation and to the cyclic core of each
/// move image of the same length. Returns the connected components.
pub struct NaiveGraph {
    pub vertices: Vec<Raw>,
    parent: Vec<usize>,
    index: HashMap<Raw, usize>,
}

impl NaiveGraph {
    pub fn build(n: usize, len: usize) -> NaiveGraph {
        let vertices = all_cyclically_reduced_words(n, len);
        let index: HashMap<Raw, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut g = NaiveGraph { parent: (0..vertices.len()).collect(), vertices, index };
        let moves = all_moves(n);
        for i in 0..g.vertices.len() {
            let v = g.vertices[i].clone();
            if !v.is_empty() {
                let mut rot = v[1..].to_vec();
                rot.push(v[0]);
                g.union(i, g.index[&rot]);
            }
            for m in &moves {
                let img = cyclic_core(&apply(m, &v));
                if img.len() == len {
                    let j = g.index[&img];
                    g.union(i, j);
                }
            }
        }
        g
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub fn component(&mut self, w: &[i32]) -> BTreeSet<Raw> {
        let root = {
            let i = self.index[w];
            self.find(i)
        };
        let members: Vec<usize> = (0..self.vertices.len()).filter(|&i| self.find(i) == root).collect();
        members.into_iter().map(|i| self.vertices[i].clone()).collect()
    }
}

/// A minimal word reached by oracle descent (some shortest cyclic image).
pub fn descend(w: &[i32], n: usize) -> Raw {
    let moves = type_two(n);
    let mut cur = cyclic_core(w);
    'outer: loop {
        for m in &moves {
            let img = cyclic_core(&apply(m, &cur));
            if img.len() < cur.len() {
                cur = img;
                continue 'outer;
            }
        }
        return cur;
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Totient by counting `1..=m` coprime to `m`.
pub fn phi_by_count(m: u64) -> u64 {
    (1..=m).filter(|&k| gcd(k, m) == 1).count() as u64
}
