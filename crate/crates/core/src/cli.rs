//! Command-line front end. `main` parses arguments and maps [`Outcome`]s and
//! errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiment::{
    rows_to_csv, rows_to_text, run_grid, table_serena, table_strategies, table_tiling, table_vectors, TableDiff,
    VectorRow,
};
use crate::graph::{build_grid, parse_dims, GridSpec, Range, Topology};
use crate::priority::{AssignOptions, CoupleOrder, Strategy};
use crate::reduction::{equivalence_check, transform, verify_lemmas, DEFAULT_EQUIVALENCE_LIMIT};
use crate::serena::{PrioVariant, SerenaConfig, Trace, Tracking, DEFAULT_MAX_ROUNDS};
use crate::validity::{check_h_hop, Coloring};
use crate::vector::tile_grid;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "hopcolor", version, about = "h-hop node coloring experiments on sensor grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    Vectors,
    Tiling,
    Serena,
    Strategies,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the distributed 3-hop coloring protocol on a grid.
    Serena {
        #[arg(long, value_parser = parse_grid)]
        grid: (u32, u32),
        #[arg(long)]
        range: Range,
        #[arg(long, default_value = "vector")]
        prio: Strategy,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "sumdeg")]
        prio_variant: PrioVariant,
        #[arg(long, default_value = "guarded")]
        tracking: Tracking,
        #[arg(long, default_value = "asc")]
        couple_order: CoupleOrder,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
        max_rounds: u32,
        /// Also write the coloring (`id color` lines) to this file.
        #[arg(long)]
        coloring_out: Option<PathBuf>,
        /// Also write the grid topology to this file.
        #[arg(long)]
        topology_out: Option<PathBuf>,
    },
    /// Solve for the optimal generator vectors and report the bounds.
    Vector {
        #[arg(long)]
        range: Range,
        #[arg(long)]
        hops: u32,
        /// Tile a grid of this size with the solved pattern and check it.
        #[arg(long, value_parser = parse_grid)]
        tile: Option<(u32, u32)>,
    },
    /// Build the h-hop instance for a graph and check its properties.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        hops: u32,
        /// Where to write the transformed graph.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the added-node sidecar; defaults to `<out>.sidecar`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Largest input for which chromatic numbers are computed.
        #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_LIMIT)]
        equivalence_limit: usize,
    },
    /// Check a coloring of a topology for h-hop conflicts.
    Check {
        topology: PathBuf,
        coloring: PathBuf,
        #[arg(long, default_value_t = 3)]
        hops: u32,
    },
    /// Recompute the reference tables and diff them against the pinned values.
    Tables {
        #[arg(long, value_enum)]
        only: Option<TableName>,
        #[arg(long, default_value = "guarded")]
        tracking: Tracking,
    },
}

fn parse_grid(s: &str) -> std::result::Result<(u32, u32), String> {
    parse_dims(s).map_err(|e| e.to_string())
}

/// Text written to stdout, and the exit code it should end with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn new(stdout: String, ok: bool) -> Self {
        Outcome { stdout, code: if ok { EXIT_OK } else { EXIT_INVALID } }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Per-round `round id:color ...` lines.
pub fn trace_dump(trace: &Trace) -> String {
    let mut out = String::new();
    for r in &trace.rounds {
        let _ = write!(out, "round {}", r.round);
        for (id, c) in &r.colored {
            let _ = write!(out, " {id}:{c}");
        }
        out.push('\n');
    }
    out
}

/// Exit code for an error returned by [`execute`].
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonTermination { .. } => EXIT_GUARD,
        _ => EXIT_USAGE,
    }
}

pub fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Serena {
            grid,
            range,
            prio,
            seed,
            prio_variant,
            tracking,
            couple_order,
            format,
            max_rounds,
            coloring_out,
            topology_out,
        } => {
            let spec = GridSpec::new(grid.0, grid.1, range)?;
            let opts = AssignOptions { seed, variant: prio_variant, couple_order };
            let o = run_grid(&spec, prio, opts, SerenaConfig { max_rounds, tracking })?;
            if let Some(p) = coloring_out {
                write(&p, &o.coloring.to_text())?;
            }
            if let Some(p) = topology_out {
                write(&p, &build_grid(&spec).to_text())?;
            }
            let rows = [o.row];
            let stdout = match format {
                Format::Text => rows_to_text(&rows),
                Format::Csv => rows_to_csv(&rows)?,
            };
            Ok(Outcome::new(stdout, rows[0].valid))
        }
        Command::Vector { range, hops, tile } => {
            let row = VectorRow::solve(range, hops)?;
            let mut out = format!("{}\n{}\n", VectorRow::header(), row.line());
            let mut ok = true;
            if let Some((w, h)) = tile {
                let spec = GridSpec::new(w, h, range)?;
                let c = tile_grid(&spec, &row.pair)?;
                let report = check_h_hop(&build_grid(&spec), &c, hops)?;
                ok = report.valid;
                let _ = writeln!(out, "tile {w}x{h} colors {} valid {}", c.color_count(), report.valid);
            }
            Ok(Outcome::new(out, ok))
        }
        Command::Reduce { graph, hops, out, sidecar, equivalence_limit } => {
            let g = Topology::parse_text(&read(&graph)?)?;
            let r = transform(&g, hops)?;
            let lemmas = verify_lemmas(&g, &r)?;
            let mut text = format!("{lemmas}\n");
            for f in &lemmas.failures {
                let _ = writeln!(text, "failure: {f}");
            }
            let mut ok = lemmas.all_ok();
            if g.len() <= equivalence_limit {
                let eq = equivalence_check(&g, hops, equivalence_limit)?;
                let _ = writeln!(
                    text,
                    "k={} m={} k'={} lifted={} equivalence={}",
                    eq.k,
                    eq.m,
                    eq.k_prime,
                    eq.lifted_colors,
                    if eq.holds() { "ok" } else { "FAIL" }
                );
                ok &= eq.holds();
            }
            if let Some(p) = &out {
                write(p, &r.gprime.to_text())?;
                let side = sidecar.unwrap_or_else(|| {
                    let mut s = p.clone().into_os_string();
                    s.push(".sidecar");
                    s.into()
                });
                write(&side, &r.sidecar_text())?;
            }
            Ok(Outcome::new(text, ok))
        }
        Command::Check { topology, coloring, hops } => {
            let t = Topology::parse_text(&read(&topology)?)?;
            let c = Coloring::parse_text(&read(&coloring)?)?;
            let report = check_h_hop(&t, &c, hops)?;
            let mut out =
                format!("valid {} colors {} violations {}\n", report.valid, c.color_count(), report.violations.len());
            for v in &report.violations {
                let _ = writeln!(out, "conflict {} {} hops {} color {}", v.u, v.v, v.hops, v.color);
            }
            Ok(Outcome::new(out, report.valid))
        }
        Command::Tables { only, tracking } => {
            let cfg = SerenaConfig { tracking, ..SerenaConfig::default() };
            let mut diffs: Vec<TableDiff> = Vec::new();
            let wants = |t: TableName| only.is_none_or(|o| o == t);
            if wants(TableName::Vectors) {
                diffs.extend(table_vectors()?);
            }
            if wants(TableName::Tiling) {
                diffs.extend(table_tiling()?);
            }
            if wants(TableName::Serena) {
                diffs.extend(table_serena(cfg)?);
            }
            if wants(TableName::Strategies) {
                diffs.extend(table_strategies(cfg)?);
            }
            let mismatches = diffs.iter().filter(|d| !d.matches).count();
            let mut out: String = diffs.iter().map(|d| d.line() + "\n").collect();
            let _ = writeln!(out, "{} rows, {mismatches} differ", diffs.len());
            Ok(Outcome::new(out, mismatches == 0))
        }
    }
}
