//! `ktour`: classify, construct, verify and search knight's tours from the shell.
//!
//! Exit codes: 0 success or tourable, 1 not tourable or a violation,
//! 2 usage or input errors, 3 search budget exhausted.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ktour::construct::blocks::{catalog, LibrarySource};
use ktour::feasibility::{coprime_necessity, knuth_connectivity_2d};
use ktour::io::{import_document, Metadata};
use ktour::oracle::Outcome;
use ktour::{
    classify_nd, disjoint_site_pair, export_grid, export_json, find_sites, is_connected, BlockLibrary, BoardSpec,
    Cell, Constructor, Error, MoveParams, SearchBudget, SearchConstraints, Tour,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "ktour", version, about = "Closed knight's tours on n-dimensional boards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide tourability from the board shape alone.
    Classify {
        dims: Dims,
        #[command(flatten)]
        moves: Moves,
        #[arg(long, value_enum, default_value_t = TextFormat::Json)]
        format: TextFormat,
    },
    /// Build a verified closed tour by construction.
    Construct {
        dims: Dims,
        #[command(flatten)]
        out: Output,
    },
    /// Check a tour document; exit 1 on any violation.
    Verify { file: PathBuf },
    /// List the sites of a closed tour.
    Sites {
        file: PathBuf,
        /// Report one pair of disjoint sites instead of the full list.
        #[arg(long)]
        disjoint: bool,
    },
    /// Run the exhaustive search.
    Solve(SolveArgs),
    /// Manage the base-block cache.
    Blocks {
        #[command(subcommand)]
        action: BlocksAction,
    },
    /// Construction and verification throughput.
    Bench {
        #[arg(long, default_value_t = 1_000_000)]
        max_cells: usize,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Subcommand)]
enum BlocksAction {
    /// Derive blocks by constrained search and write them with a provenance manifest.
    Regenerate {
        /// Rebuild only the named blocks, keeping the rest of the cache.
        #[arg(long)]
        only: Vec<String>,
        /// Target directory; defaults to $KTOUR_BLOCKS_DIR or ./ktour-blocks.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Show the catalogued blocks and where the library comes from.
    List,
}

#[derive(Args)]
struct Moves {
    #[arg(long, default_value_t = 2)]
    alpha: usize,
    #[arg(long, default_value_t = 1)]
    beta: usize,
}

impl Moves {
    fn params(&self) -> Result<MoveParams, Failure> {
        MoveParams::new(self.alpha, self.beta).map_err(Failure::usage)
    }
}

#[derive(Args)]
struct Output {
    /// Write the tour here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TourFormat::Json)]
    format: TourFormat,
}

#[derive(Args)]
struct SolveArgs {
    dims: Dims,
    #[command(flatten)]
    moves: Moves,
    #[arg(long, conflicts_with = "open")]
    closed: bool,
    #[arg(long)]
    open: bool,
    /// First cell, e.g. `1,1`.
    #[arg(long, value_parser = parse_cell)]
    start: Option<Cell>,
    /// Last cell of an open path.
    #[arg(long, value_parser = parse_cell, requires = "open")]
    end: Option<Cell>,
    /// Edge the tour must use, e.g. `1,1:2,3`.
    #[arg(long, value_parser = parse_edge)]
    require_edge: Vec<(Cell, Cell)>,
    #[arg(long, env = "KTOUR_BUDGET_MS", default_value_t = 60_000)]
    budget_ms: u64,
    #[arg(long, env = "KTOUR_SEED")]
    seed: Option<u64>,
    #[arg(long, env = "KTOUR_WORKERS", default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum TourFormat {
    Json,
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Json,
    Text,
}

/// A message for standard error plus the exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure {
            code: USAGE,
            message: e.to_string(),
        }
    }

    fn negative(e: impl ToString) -> Self {
        Failure {
            code: NEGATIVE,
            message: e.to_string(),
        }
    }
}

/// Board sides such as `6x6x4` or `6,6,4`.
#[derive(Clone)]
struct Dims(Vec<usize>);

impl std::str::FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_dims(s).map(Dims)
    }
}

fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    let dims = s
        .split(['x', 'X', ','])
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    BoardSpec::new(dims.clone()).map_err(|e| e.to_string())?;
    Ok(dims)
}

fn parse_cell(s: &str) -> Result<Cell, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Cell)
}

fn parse_edge(s: &str) -> Result<(Cell, Cell), String> {
    let (a, b) = s.split_once(':').ok_or("an edge is written `a1,a2:b1,b2`")?;
    Ok((parse_cell(a)?, parse_cell(b)?))
}

/// Writes a line to standard output; a closed pipe is not an error.
fn say(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", text.trim_end());
}

fn print_json(v: &Value) {
    say(&serde_json::to_string_pretty(v).expect("values serialize"));
}

fn load(file: &Path) -> Result<(Tour, Metadata), Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    import_document(&text).map_err(|e| Failure::negative(format!("{}: {e}", file.display())))
}

/// Verifies, renders and writes a tour; returns the rendered text when no file is given.
fn emit(t: &Tour, meta: Metadata, out: &Output) -> Result<Option<String>, Failure> {
    t.verify().map_err(|v| Failure::negative(format!("refusing to write an invalid tour: {v}")))?;
    let text = match out.format {
        TourFormat::Json => export_json(t, meta),
        TourFormat::Grid => export_grid(t),
    }
    .map_err(Failure::usage)?;
    match &out.output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn metadata(trace: Vec<String>) -> Metadata {
    Metadata {
        generator: format!("ktour {}", env!("CARGO_PKG_VERSION")),
        trace,
        provenance: None,
    }
}

fn classify(Dims(dims): Dims, moves: Moves, format: TextFormat) -> Result<u8, Failure> {
    let board = BoardSpec::new(dims).map_err(Failure::usage)?;
    let mp = moves.params()?;
    if mp.is_classical() {
        let v = classify_nd(&board);
        match format {
            TextFormat::Json => print_json(&json!({ "dims": board.dims(), "verdict": v })),
            TextFormat::Text => say(&format!("{board}: {v}")),
        }
        return Ok(if v.tourable { OK } else { NEGATIVE });
    }
    // No shape theorem covers other moves; report the necessary conditions.
    let coprime = coprime_necessity(mp);
    let connected = is_connected(&board, mp);
    let closed_form = (board.rank() == 2).then(|| knuth_connectivity_2d(board.dims()[0], board.dims()[1], mp));
    let possible = coprime && connected;
    match format {
        TextFormat::Json => print_json(&json!({
            "dims": board.dims(),
            "alpha": mp.alpha(),
            "beta": mp.beta(),
            "coprime": coprime,
            "connected": connected,
            "closed_form_connected": closed_form,
            "tourable": if possible { Value::Null } else { Value::Bool(false) },
        })),
        TextFormat::Text => {
            let state = if possible { "undecided (necessary conditions hold)" } else { "not tourable" };
            say(&format!("{board} ({},{}): {state}; coprime {coprime}, connected {connected}", mp.alpha(), mp.beta()));
        }
    }
    Ok(if possible { OK } else { NEGATIVE })
}

fn construct(Dims(dims): Dims, out: Output) -> Result<u8, Failure> {
    let board = BoardSpec::new(dims).map_err(Failure::usage)?;
    let mut c = Constructor::default();
    match c.construct(&board) {
        Ok(t) => {
            if let Some(text) = emit(&t, metadata(c.trace().to_vec()), &out)? {
                say(&text);
            }
            Ok(OK)
        }
        Err(Error::NotTourable(v)) => {
            print_json(&json!({ "dims": board.dims(), "verdict": v }));
            Ok(NEGATIVE)
        }
        Err(e) => Err(Failure::negative(e)),
    }
}

fn verify(file: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let report = match import_document(&text) {
        Ok((t, _)) => json!({ "ok": true, "dims": t.board().dims(), "cells": t.len(), "closed": t.is_closed() }),
        Err(Error::Verification(v)) => json!({ "ok": false, "violation": v, "message": v.to_string() }),
        Err(e) => json!({ "ok": false, "error": e.to_string() }),
    };
    print_json(&report);
    Ok(if report["ok"] == true { OK } else { NEGATIVE })
}

fn site_json(t: &Tour, s: &ktour::Site) -> Value {
    let cells: Vec<Vec<usize>> = s.support.iter().map(|&p| t.cell(p).0).collect();
    json!({ "label": s.label(), "site": s, "cells": cells })
}

fn sites(file: &Path, disjoint: bool) -> Result<u8, Failure> {
    let (t, _) = load(file)?;
    let all = find_sites(&t).map_err(Failure::negative)?;
    if disjoint {
        return match disjoint_site_pair(&all) {
            Some((a, b)) => {
                print_json(&json!([site_json(&t, &a), site_json(&t, &b)]));
                Ok(OK)
            }
            None => {
                print_json(&json!([]));
                Ok(NEGATIVE)
            }
        };
    }
    print_json(&Value::Array(all.iter().map(|s| site_json(&t, s)).collect()));
    Ok(OK)
}

fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let board = BoardSpec::new(a.dims.0).map_err(Failure::usage)?;
    let mp = a.moves.params()?;
    let mut c = if a.open { SearchConstraints::open() } else { SearchConstraints::closed() };
    c.start = a.start;
    c.end = a.end;
    c.required_edges = a.require_edge;
    let mut budget = SearchBudget::default()
        .with_time_limit(Duration::from_millis(a.budget_ms))
        .with_workers(a.workers);
    if let Some(seed) = a.seed {
        budget = budget.with_seed(seed);
    }
    let outcome = ktour::solve(&board, mp, &c, &budget).map_err(Failure::usage)?;
    match outcome {
        Outcome::Found(t) => {
            let trace = vec![format!("search with seed {}", budget.seed)];
            match emit(&t, metadata(trace), &a.out)? {
                Some(text) => say(&text),
                None => print_json(&json!({ "outcome": "found", "cells": t.len() })),
            }
            Ok(OK)
        }
        Outcome::ProvedNone(proof) => {
            print_json(&json!({ "outcome": "proved_none", "proof": proof }));
            Ok(NEGATIVE)
        }
        Outcome::Exhausted(stats) => {
            print_json(&json!({ "outcome": "exhausted", "stats": stats }));
            Ok(EXHAUSTED)
        }
    }
}

fn blocks(action: BlocksAction) -> Result<u8, Failure> {
    match action {
        BlocksAction::Regenerate { only, dir } => {
            let dir = dir.unwrap_or_else(BlockLibrary::cache_dir);
            if let Some(bad) = only.iter().find(|n| !catalog().iter().any(|s| &s.name == *n)) {
                return Err(Failure::usage(format!("unknown block {bad}; see `ktour blocks list`")));
            }
            let fresh = if only.is_empty() {
                BlockLibrary::derive(None)
            } else {
                BlockLibrary::derive(Some(&only))
            }
            .map_err(Failure::negative)?;
            let names: Vec<String> = fresh.blocks().map(|b| b.name.clone()).collect();
            // A partial rebuild keeps whatever else the cache already holds.
            let lib = match (only.is_empty(), BlockLibrary::load(&dir)) {
                (false, Ok(existing)) => existing.merged(fresh),
                _ => fresh,
            };
            lib.save(&dir).map_err(Failure::usage)?;
            print_json(&json!({ "dir": dir, "regenerated": names, "total": lib.blocks().count() }));
            Ok(OK)
        }
        BlocksAction::List => {
            let lib = BlockLibrary::global();
            let source = match lib.source() {
                LibrarySource::Derived => "derived".to_string(),
                LibrarySource::Loaded(p) => p.display().to_string(),
            };
            let blocks: Vec<Value> = catalog()
                .iter()
                .map(|s| json!({ "name": s.name, "dims": s.dims, "constraint": s.tag.to_string() }))
                .collect();
            print_json(&json!({ "source": source, "blocks": blocks }));
            Ok(OK)
        }
    }
}

/// Boards for the throughput table, smallest first.
fn bench_boards(max_cells: usize) -> Vec<Vec<usize>> {
    let mut boards = Vec::new();
    for rank in 2..=6 {
        for side in [4, 6, 8, 10, 12, 16, 20, 32, 64, 128] {
            let d = vec![side; rank];
            let tourable = BoardSpec::new(d.clone()).is_ok_and(|b| classify_nd(&b).tourable);
            if tourable && d.iter().product::<usize>() <= max_cells {
                boards.push(d);
            }
        }
    }
    boards.sort_by_key(|d| d.iter().product::<usize>());
    boards
}

fn bench(max_cells: usize, format: TextFormat) -> Result<u8, Failure> {
    let _ = BlockLibrary::global();
    let mut rows = Vec::new();
    for d in bench_boards(max_cells) {
        let board = BoardSpec::new(d.clone()).map_err(Failure::usage)?;
        let start = Instant::now();
        let t = Constructor::default().construct(&board).map_err(Failure::negative)?;
        let built = start.elapsed();
        let start = Instant::now();
        t.verify().map_err(Failure::negative)?;
        let checked = start.elapsed();
        rows.push((d, t.len(), built, checked));
    }
    match format {
        TextFormat::Json => print_json(&Value::Array(
            rows.iter()
                .map(|(d, n, b, v)| {
                    json!({ "dims": d, "cells": n, "construct_ms": b.as_secs_f64() * 1e3, "verify_ms": v.as_secs_f64() * 1e3 })
                })
                .collect(),
        )),
        TextFormat::Text => {
            say(&format!("{:<24} {:>10} {:>14} {:>12} {:>14}", "board", "cells", "construct ms", "verify ms", "cells/s"));
            for (d, n, b, v) in rows {
                let name = d.iter().map(usize::to_string).collect::<Vec<_>>().join("x");
                let rate = n as f64 / (b + v).as_secs_f64().max(1e-9);
                say(&format!(
                    "{name:<24} {n:>10} {:>14.3} {:>12.3} {rate:>14.0}",
                    b.as_secs_f64() * 1e3,
                    v.as_secs_f64() * 1e3
                ));
            }
        }
    }
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { dims, moves, format } => classify(dims, moves, format),
        Command::Construct { dims, out } => construct(dims, out),
        Command::Verify { file } => verify(&file),
        Command::Sites { file, disjoint } => sites(&file, disjoint),
        Command::Solve(a) => solve(a),
        Command::Blocks { action } => blocks(action),
        Command::Bench { max_cells, format } => bench(max_cells, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ktour: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
