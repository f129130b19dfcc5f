//! Experiment sweeps with CSV output.
//!
//! Rows are produced in increasing `m` and written with fixed headers, so
//! two runs with the same flags and `timing = false` are byte-identical.

use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, ensure};
use autorbit::orbits::peak_set_with;
use autorbit::primitives::{count_primitives, cyclically_reduced_words, PrimitiveCount};
use autorbit::whitehead::is_minimal_with;
use autorbit::{Letter, MoveSet, Word};
use serde::Serialize;

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// `8m² − 40m`.
pub fn f2_prediction(m: i64) -> i64 {
    8 * m * m - 40 * m
}

/// `48m⁴ − 480m³ + 1104m² − 672m`.
pub fn f3_prediction(m: i64) -> i64 {
    48 * m.pow(4) - 480 * m.pow(3) + 1104 * m * m - 672 * m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F2Row {
    pub m: usize,
    pub minimal_word_count: usize,
    pub class_count: usize,
    pub max_peak_size: usize,
    pub argmax_word: String,
    pub predicted: i64,
    pub elapsed_ms: u64,
}

/// Splits the minimal words of length `m` in `F_2` into peak sets.
///
/// Seeds are taken in lexicographic order and one visited set is shared,
/// so every class is explored once, from its least member. The largest
/// class is reported by that least member (earliest on ties). Fails if the
/// classes do not partition the minimal words.
pub fn f2_row(m: usize, cap: usize, timing: bool) -> anyhow::Result<F2Row> {
    ensure!(m >= 1, "length must be at least 1");
    let start = Instant::now();
    let moves = MoveSet::new(2);
    let minimal: Vec<Word> = cyclically_reduced_words(2, m)
        .into_iter()
        .filter(|w| is_minimal_with(&moves, w).expect("cyclically reduced"))
        .collect();
    let mut visited: HashSet<Word> = HashSet::with_capacity(minimal.len());
    let (mut classes, mut best, mut argmax) = (0, 0, String::new());
    for u in &minimal {
        if visited.contains(u) {
            continue;
        }
        let ps = peak_set_with(&moves, u, cap)?;
        classes += 1;
        if ps.len() > best {
            best = ps.len();
            argmax = u.to_string();
        }
        for v in ps.members() {
            ensure!(v.len() == m && visited.insert(v.clone()), "partition check failed at {v}");
        }
    }
    ensure!(visited.len() == minimal.len(), "partition check failed: {} covered, {} minimal", visited.len(), minimal.len());
    Ok(F2Row {
        m,
        minimal_word_count: minimal.len(),
        class_count: classes,
        max_peak_size: best,
        argmax_word: argmax,
        predicted: f2_prediction(m as i64),
        elapsed_ms: elapsed_ms(start, timing),
    })
}

pub fn bench_f2(min_len: usize, max_len: usize, cap: usize, timing: bool) -> anyhow::Result<Vec<F2Row>> {
    (min_len..=max_len).map(|m| f2_row(m, cap, timing)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F3Row {
    pub m: usize,
    pub k: usize,
    pub word: String,
    pub is_minimal: bool,
    pub peak_size: usize,
    pub predicted: i64,
    #[serde(rename = "match")]
    pub matches: bool,
    pub elapsed_ms: u64,
}

/// `a^k·b·a·B·a·b²·c²` with `k = m − 8`, a word of length `m` in `F_3`.
pub fn f3_word(m: usize) -> anyhow::Result<Word> {
    if m < 9 {
        bail!("the family starts at m = 9, got {m}");
    }
    let (a, b, c) = (Letter::generator(1), Letter::generator(2), Letter::generator(3));
    let tail = [b, a, b.inverse(), a, b, b, c, c];
    Ok(Word::new(3, std::iter::repeat_n(a, m - 8).chain(tail))?)
}

/// Size of `A(u)` for the family word of length `m`. A non-minimal word is
/// reported as such, with the size of the peak set of its minimisation.
pub fn f3_row(m: usize, cap: usize, timing: bool) -> anyhow::Result<F3Row> {
    let start = Instant::now();
    let u = f3_word(m)?;
    let moves = MoveSet::new(3);
    let minimal = is_minimal_with(&moves, &u)?;
    let ps = peak_set_with(&moves, &u, cap)?;
    let predicted = f3_prediction(m as i64);
    Ok(F3Row {
        m,
        k: m - 8,
        word: u.to_string(),
        is_minimal: minimal,
        peak_size: ps.len(),
        predicted,
        matches: minimal && ps.len() as i64 == predicted,
        elapsed_ms: elapsed_ms(start, timing),
    })
}

pub fn bench_f3(min_len: usize, max_len: usize, cap: usize, timing: bool) -> anyhow::Result<Vec<F3Row>> {
    (min_len..=max_len).map(|m| f3_row(m, cap, timing)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimRow {
    pub m: usize,
    pub total_primitives: u64,
    pub cyclically_reduced_primitives: u64,
    #[serde(rename = "formula_4mPhi")]
    pub formula: u64,
    pub bound: String,
    pub pass: bool,
}

impl From<PrimitiveCount> for PrimRow {
    fn from(c: PrimitiveCount) -> PrimRow {
        PrimRow {
            m: c.m,
            total_primitives: c.total,
            cyclically_reduced_primitives: c.cyclically_reduced,
            formula: c.formula,
            bound: format!("{:.6}", c.bound),
            pass: c.pass,
        }
    }
}

pub fn primcount_row(m: usize) -> anyhow::Result<PrimRow> {
    Ok(count_primitives(m)?.into())
}

/// Writes rows with a header line, even when `rows` is empty.
pub fn write_csv<T: Serialize>(out: impl Write, header: &[&str], rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const F2_HEADER: &[&str] =
    &["m", "minimal_word_count", "class_count", "max_peak_size", "argmax_word", "predicted", "elapsed_ms"];
pub const F3_HEADER: &[&str] = &["m", "k", "word", "is_minimal", "peak_size", "predicted", "match", "elapsed_ms"];
pub const PRIM_HEADER: &[&str] =
    &["m", "total_primitives", "cyclically_reduced_primitives", "formula_4mPhi", "bound", "pass"];
