//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use autorbit::endos::torsion_order_realizable;
use autorbit::orbits::{self, OrbitError, DEFAULT_CAP};
use autorbit::primitives::{count_cyclically_reduced_primitives, enumerate_cyclically_reduced_primitives};
use autorbit::whitehead::{minimize, replay, trace_genmap};
use autorbit::{EndoError, GenMap, Step, Word, WordError};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bench;
use crate::format::{self, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "autorbit", version, about = "Automorphic orbits in free groups")]
pub struct Cli {
    /// Rank of the free group.
    #[arg(long, global = true, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Compact)]
    pub format: Format,
    /// Report elapsed_ms as 0 so output is reproducible byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free reduction.
    Reduce { word: String },
    /// Shortest automorphic image by Whitehead moves.
    Minimize {
        word: String,
        #[arg(long)]
        emit_witness: bool,
    },
    /// Minimal-length automorphic images of a word.
    Peakset {
        word: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, conflicts_with = "count")]
        list: bool,
        #[arg(long)]
        count: bool,
        /// Print the trace from the input to this member.
        #[arg(long, value_name = "TARGET")]
        emit_witness: Option<String>,
    },
    /// Decide automorphic equivalence; exit 3 when not equivalent.
    Equiv {
        u: String,
        v: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Automorphic images of length |u| + K.
    Sphere {
        word: String,
        #[arg(long)]
        slack: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Forward orbit of a word under the endomorphism in a map file.
    Orbitmap {
        #[arg(long)]
        map: PathBuf,
        word: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// A word whose orbit size equals the order of a finite-order automorphism.
    Realizer {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_exp: u32,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// Whether Aut(F_n) has an element of order k.
    Torsion { k: u64, n: u64 },
    /// Census of primitive words of length m in F_2.
    Primcount {
        m: usize,
        /// Count only cyclically reduced primitives against 4mΦ(m).
        #[arg(long)]
        cyclic: bool,
    },
    /// Peak-set sizes over all minimal words of F_2.
    BenchF2(BenchArgs),
    /// Peak-set sizes for the F_3 family a^k·baBabbcc.
    BenchF3(BenchArgs),
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub min_len: usize,
    #[arg(long)]
    pub max_len: usize,
    /// CSV destination; `-` for standard output.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

/// Invalid input, as opposed to a failed computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

struct Ctx<'a> {
    rank: usize,
    format: Format,
    timing: bool,
    start: Instant,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn word(&self, text: &str) -> anyhow::Result<Word> {
        self.word_at(text, self.rank)
    }

    fn word_at(&self, text: &str, rank: usize) -> anyhow::Result<Word> {
        Word::parse(text, rank).map_err(|e| usage(format!("invalid word {text:?}: {e}")))
    }

    fn show(&self, w: &Word) -> String {
        format::word(w, self.format)
    }

    fn elapsed_ms(&self) -> u64 {
        if self.timing {
            self.start.elapsed().as_millis() as u64
        } else {
            0
        }
    }

    fn json(&mut self, query: Value, result: Value, witness: &[Step], visited: usize) -> anyhow::Result<()> {
        let doc = json!({
            "query": query,
            "result": result,
            "witness": witness.iter().map(format::step_json).collect::<Vec<_>>(),
            "stats": { "visited": visited, "elapsed_ms": self.elapsed_ms() },
        });
        writeln!(self.out, "{doc}")?;
        Ok(())
    }

    fn lines(&mut self, lines: impl IntoIterator<Item = String>) -> anyhow::Result<()> {
        for l in lines {
            writeln!(self.out, "{l}")?;
        }
        Ok(())
    }

    fn trace_lines(&self, start: &Word, steps: &[Step]) -> Vec<String> {
        let mut lines: Vec<String> = steps.iter().map(|s| format::step_text(s, self.format)).collect();
        lines.push("map:".into());
        lines.extend(format::map_text(&trace_genmap(start, steps), self.format).into_iter().map(|l| format!("  {l}")));
        lines
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut ctx = Ctx { rank: cli.rank, format: cli.format, timing: !cli.no_timing, start: Instant::now(), out };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            if let Some(&OrbitError::CapExceeded { cap, visited }) = e.downcast_ref::<OrbitError>() {
                let _ = writeln!(
                    err,
                    "error: cap exceeded: visited {visited} with cap {cap} (elapsed_ms {})",
                    ctx.elapsed_ms()
                );
                return EXIT_CAP;
            }
            let _ = writeln!(err, "error: {e:#}");
            let bad_input = e.downcast_ref::<Usage>().is_some()
                || e.downcast_ref::<WordError>().is_some()
                || e.downcast_ref::<EndoError>().is_some()
                || e.chain().any(|c| c.downcast_ref::<serde_json::Error>().is_some());
            if bad_input {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> anyhow::Result<i32> {
    if ctx.rank == 0 {
        return Err(usage("--rank must be at least 1"));
    }
    let json = ctx.format == Format::Json;
    match command {
        Command::Reduce { word } => {
            let w = ctx.word(&word)?;
            if json {
                ctx.json(json!({"command": "reduce", "word": word}), json!(ctx.show(&w)), &[], 0)?;
            } else {
                ctx.lines([ctx.show(&w)])?;
            }
        }
        Command::Minimize { word, emit_witness } => {
            let w = ctx.word(&word)?;
            let m = minimize(&w);
            if json {
                let steps = if emit_witness { &m.steps[..] } else { &[] };
                ctx.json(json!({"command": "minimize", "word": word}), json!(ctx.show(&m.word)), steps, 0)?;
            } else {
                let mut lines = vec![ctx.show(&m.word)];
                if emit_witness {
                    lines.extend(ctx.trace_lines(&w, &m.steps));
                }
                ctx.lines(lines)?;
            }
        }
        Command::Peakset { word, cap, list: _, count, emit_witness } => {
            let w = ctx.word(&word)?;
            let ps = orbits::peak_set(&w, cap)?;
            let steps = match &emit_witness {
                Some(t) => {
                    let target = ctx.word(t)?;
                    let steps = ps
                        .trace_from_input(&target)
                        .map_err(|_| usage(format!("{t} is not in the peak set")))?;
                    ensure_route(&w, &steps, &target)?;
                    Some(steps)
                }
                None => None,
            };
            if json {
                let result = if count {
                    json!(ps.len())
                } else {
                    json!(ps.sorted_members().iter().map(|v| ctx.show(v)).collect::<Vec<_>>())
                };
                let query = json!({"command": "peakset", "word": word, "target": emit_witness});
                ctx.json(query, result, steps.as_deref().unwrap_or(&[]), ps.len())?;
            } else {
                let mut lines = if count {
                    vec![ps.len().to_string()]
                } else {
                    ps.sorted_members().iter().map(|v| ctx.show(v)).collect()
                };
                if let Some(steps) = &steps {
                    lines.extend(ctx.trace_lines(&w, steps));
                }
                ctx.lines(lines)?;
            }
        }
        Command::Equiv { u, v, cap } => {
            let (wu, wv) = (ctx.word(&u)?, ctx.word(&v)?);
            let answer = orbits::is_equivalent(&wu, &wv, cap)?;
            let query = json!({"command": "equiv", "u": u, "v": v});
            return match answer {
                orbits::Equivalence::Equivalent(cert) => {
                    ensure_route(&wu, &cert.steps, &wv)?;
                    if cert.witness.apply(&wu)? != wv {
                        bail!("witness failed verification");
                    }
                    if json {
                        ctx.json(query, json!(true), &cert.steps, cert.visited)?;
                    } else {
                        let mut lines = vec!["equivalent".to_string()];
                        lines.extend(ctx.trace_lines(&wu, &cert.steps));
                        ctx.lines(lines)?;
                    }
                    Ok(EXIT_OK)
                }
                orbits::Equivalence::NotEquivalent { visited } => {
                    if json {
                        ctx.json(query, json!(false), &[], visited)?;
                    } else {
                        ctx.lines(["not equivalent".to_string()])?;
                    }
                    Ok(EXIT_NOT_EQUIVALENT)
                }
            };
        }
        Command::Sphere { word, slack, cap } => {
            let w = ctx.word(&word)?;
            let sphere = match orbits::image_sphere(&w, slack, cap) {
                Err(OrbitError::NotMinimal) => return Err(usage(format!("{word} is not a minimal word"))),
                r => r?,
            };
            let shown: Vec<String> = sphere.iter().map(|v| ctx.show(v)).collect();
            if json {
                ctx.json(json!({"command": "sphere", "word": word, "slack": slack}), json!(shown), &[], sphere.len())?;
            } else {
                ctx.lines(shown)?;
            }
        }
        Command::Orbitmap { map, word, max_steps } => {
            let f = format::read_map(&map).map_err(|e| usage(format!("{e:#}")))?;
            let w = ctx.word_at(&word, f.rank())?;
            let trace = orbits::orbit_under_map(&f, &w, max_steps)?;
            let shown: Vec<String> = trace.words.iter().map(|v| ctx.show(v)).collect();
            if json {
                let result = json!({
                    "words": shown,
                    "cardinality": trace.cardinality(),
                    "tail": trace.tail_length,
                    "cycle": trace.cycle_length,
                });
                let query = json!({"command": "orbitmap", "map": map.display().to_string(), "word": word});
                ctx.json(query, result, &[], trace.cardinality())?;
            } else {
                let mut lines = shown;
                lines.push(format!(
                    "cardinality {} tail {} cycle {}{}",
                    trace.cardinality(),
                    trace.tail_length,
                    trace.cycle_length,
                    if trace.is_closed() { "" } else { " (truncated)" }
                ));
                ctx.lines(lines)?;
            }
        }
        Command::Realizer { map, max_exp, max_steps } => {
            let f = format::read_map(&map).map_err(|e| usage(format!("{e:#}")))?;
            let r = match orbits::find_orbit_realizer(&f, max_exp, max_steps) {
                Err(OrbitError::NotFiniteOrder) => return Err(usage("map is not an automorphism of finite order")),
                r => r?,
            };
            if json {
                let query = json!({"command": "realizer", "map": map.display().to_string()});
                ctx.json(query, json!({"word": ctx.show(&r.word), "order": r.order}), &[], 0)?;
            } else {
                ctx.lines([format!("{} {}", ctx.show(&r.word), r.order)])?;
            }
        }
        Command::Torsion { k, n } => {
            if k == 0 {
                return Err(usage("order must be at least 1"));
            }
            let answer = torsion_order_realizable(k, n);
            if json {
                ctx.json(json!({"command": "torsion", "k": k, "n": n}), json!(answer), &[], 0)?;
            } else {
                ctx.lines([answer.to_string()])?;
            }
        }
        Command::Primcount { m, cyclic } => {
            let bad = |e: autorbit::primitives::PrimitiveError| usage(e.to_string());
            if cyclic {
                let census = enumerate_cyclically_reduced_primitives(m).map_err(bad)?.len() as u64;
                let formula = count_cyclically_reduced_primitives(m as u64).map_err(bad)?;
                if json {
                    let result = json!({"cyclically_reduced_primitives": census, "formula_4mPhi": formula});
                    ctx.json(json!({"command": "primcount", "m": m, "cyclic": true}), result, &[], 0)?;
                } else {
                    ctx.lines([
                        "m,cyclically_reduced_primitives,formula_4mPhi,match".to_string(),
                        format!("{m},{census},{formula},{}", census == formula),
                    ])?;
                }
            } else {
                let row = autorbit::primitives::count_primitives(m).map_err(bad)?;
                let row = bench::PrimRow::from(row);
                if json {
                    let query = json!({"command": "primcount", "m": m, "cyclic": false});
                    ctx.json(query, serde_json::to_value(&row)?, &[], 0)?;
                } else {
                    bench::write_csv(&mut *ctx.out, bench::PRIM_HEADER, &[row])?;
                }
            }
        }
        Command::BenchF2(args) => {
            check_range(&args, 1)?;
            let rows = bench::bench_f2(args.min_len, args.max_len, args.cap, ctx.timing)?;
            emit_csv(ctx, &args.out, bench::F2_HEADER, &rows)?;
        }
        Command::BenchF3(args) => {
            check_range(&args, 9)?;
            let rows = bench::bench_f3(args.min_len, args.max_len, args.cap, ctx.timing)?;
            emit_csv(ctx, &args.out, bench::F3_HEADER, &rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn check_range(args: &BenchArgs, floor: usize) -> anyhow::Result<()> {
    if args.min_len < floor || args.min_len > args.max_len {
        return Err(usage(format!("need {floor} <= --min-len <= --max-len")));
    }
    Ok(())
}

fn emit_csv<T: serde::Serialize>(ctx: &mut Ctx<'_>, path: &PathBuf, header: &[&str], rows: &[T]) -> anyhow::Result<()> {
    if path.as_os_str() == "-" {
        return bench::write_csv(&mut *ctx.out, header, rows);
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    bench::write_csv(BufWriter::new(file), header, rows)
}

/// Replays a trace and checks it lands on `target`.
fn ensure_route(start: &Word, steps: &[Step], target: &Word) -> anyhow::Result<()> {
    if replay(start, steps) != *target {
        bail!("trace failed verification");
    }
    let map: GenMap = trace_genmap(start, steps);
    if map.apply(start)? != *target {
        bail!("witness failed verification");
    }
    Ok(())
}
