//! Text and JSON encodings: words, map files and witness traces.

use std::path::Path;

use anyhow::{bail, Context};
use autorbit::{GenMap, Letter, Step, WhiteheadMove, Word};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Compact,
    Verbose,
    Json,
}

/// Renders a word in the requested syntax. JSON uses the compact form when
/// the rank allows it.
pub fn word(w: &Word, format: Format) -> String {
    match format {
        Format::Verbose => w.to_verbose(),
        Format::Compact | Format::Json => w.to_string(),
    }
}

/// A map file: one endomorphism as `{"rank": n, "images": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapRecord {
    pub rank: usize,
    pub images: Vec<String>,
}

impl MapRecord {
    pub fn from_map(f: &GenMap) -> MapRecord {
        MapRecord { rank: f.rank(), images: f.images().iter().map(compact_or_empty).collect() }
    }

    pub fn to_map(&self) -> anyhow::Result<GenMap> {
        let images: Vec<&str> = self.images.iter().map(String::as_str).collect();
        Ok(GenMap::parse(self.rank, &images)?)
    }
}

fn compact_or_empty(w: &Word) -> String {
    w.to_compact().unwrap_or_else(|| w.to_verbose())
}

pub fn parse_map(text: &str) -> anyhow::Result<GenMap> {
    let record: MapRecord = serde_json::from_str(text).context("malformed map record")?;
    record.to_map()
}

pub fn read_map(path: &Path) -> anyhow::Result<GenMap> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_map(&text).with_context(|| format!("in {}", path.display()))
}

pub fn write_map(f: &GenMap) -> String {
    serde_json::to_string(&MapRecord::from_map(f)).expect("plain record")
}

fn signed(l: Letter) -> i64 {
    let i = l.index() as i64;
    if l.is_positive() {
        i
    } else {
        -i
    }
}

/// One witness edge as JSON.
pub fn step_json(step: &Step) -> Value {
    match step {
        Step::Move(WhiteheadMove::TypeI(targets)) => {
            json!({ "permutation": targets.iter().map(|&l| signed(l)).collect::<Vec<_>>() })
        }
        Step::Move(WhiteheadMove::TypeII { multiplier, set }) => json!({
            "multiplier": multiplier.to_string(),
            "set": set.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        }),
        Step::Rotate => json!({ "rotation": 1 }),
        Step::Conjugate(g) => json!({ "conjugate": compact_or_empty(g) }),
    }
}

/// Reads a witness edge back from its JSON form.
pub fn step_from_json(value: &Value, rank: usize) -> anyhow::Result<Step> {
    let letter = |v: &Value| -> anyhow::Result<Letter> {
        let text = v.as_str().context("letter must be a string")?;
        match Word::parse(text, rank)?.letters() {
            [l] => Ok(*l),
            _ => bail!("expected a single letter, got {text:?}"),
        }
    };
    if let Some(perm) = value.get("permutation") {
        let targets = perm
            .as_array()
            .context("permutation must be an array")?
            .iter()
            .map(|x| {
                let x = x.as_i64().context("permutation entries are signed integers")?;
                if x == 0 || x.unsigned_abs() as usize > rank {
                    bail!("permutation entry {x} outside rank {rank}");
                }
                Ok(Letter::new(x.unsigned_abs() as usize, x > 0))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(Step::Move(WhiteheadMove::type_i(targets)?));
    }
    if let Some(m) = value.get("multiplier") {
        let set = value
            .get("set")
            .and_then(Value::as_array)
            .context("type II step needs a set")?
            .iter()
            .map(letter)
            .collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(Step::Move(WhiteheadMove::type_ii(rank, letter(m)?, set)?));
    }
    if value.get("rotation").is_some() {
        return Ok(Step::Rotate);
    }
    if let Some(g) = value.get("conjugate") {
        return Ok(Step::Conjugate(Word::parse(g.as_str().context("conjugator must be a string")?, rank)?));
    }
    bail!("unrecognised step {value}")
}

/// One witness edge as a line of text.
pub fn step_text(step: &Step, format: Format) -> String {
    match step {
        Step::Move(WhiteheadMove::TypeI(targets)) => {
            let images: Vec<String> = targets.iter().map(|&l| signed(l).to_string()).collect();
            format!("permutation [{}]", images.join(", "))
        }
        Step::Move(WhiteheadMove::TypeII { multiplier, set }) => {
            let set: Vec<String> = set.iter().map(|l| l.to_string()).collect();
            format!("multiplier {multiplier} set [{}]", set.join(", "))
        }
        Step::Rotate => "rotation".to_string(),
        Step::Conjugate(g) => format!("conjugate {}", word(g, format)),
    }
}

/// `x_i -> image` lines for a generator map.
pub fn map_text(f: &GenMap, format: Format) -> Vec<String> {
    f.images()
        .iter()
        .enumerate()
        .map(|(i, w)| format!("{} -> {}", word(&Word::generator(f.rank(), i + 1), format), word(w, format)))
        .collect()
}
