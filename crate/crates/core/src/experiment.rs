//! Experiment rows shared by the CLI and the table reproductions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_grid, GridSpec, Range};
use crate::priority::{assign, AssignOptions, Strategy};
use crate::serena::{run_serena_with, SerenaConfig, SerenaRun};
use crate::validity::{check_h_hop, Coloring};
use crate::vector::{bounds, solve_vectors, tile_grid, VectorPair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub range: String,
    pub width: u32,
    pub height: u32,
    pub strategy: String,
    pub colors: usize,
    pub rounds: u32,
    pub valid: bool,
    pub seed: Option<u64>,
}

/// Result of one protocol run, with the coloring in the grid's addresses.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub row: ExperimentRow,
    pub run: SerenaRun,
    pub coloring: Coloring,
}

pub fn run_grid(spec: &GridSpec, strategy: Strategy, opts: AssignOptions, cfg: SerenaConfig) -> Result<Outcome> {
    let t = build_grid(spec);
    let a = assign(strategy, &t, spec, opts)?;
    let (air, prio) = a.apply(&t)?;
    let run = run_serena_with(&air, &prio, cfg)?;
    let back = a.original_of();
    let coloring: Coloring = run.coloring.iter().map(|(id, c)| (back[&id], c)).collect();
    let valid = check_h_hop(&t, &coloring, 3)?.valid;
    let row = ExperimentRow {
        range: spec.range.to_string(),
        width: spec.width,
        height: spec.height,
        strategy: strategy.to_string(),
        colors: coloring.color_count(),
        rounds: run.rounds,
        valid,
        seed: if strategy == Strategy::Random { opts.seed } else { None },
    };
    Ok(Outcome { row, run, coloring })
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ExperimentRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() }))
        .collect()
}

pub fn rows_to_text(rows: &[ExperimentRow]) -> String {
    let mut out = format!(
        "{:>5} {:>7} {:>9} {:>6} {:>6} {:>5} {:>6}\n",
        "range", "grid", "strategy", "colors", "rounds", "valid", "seed"
    );
    for r in rows {
        let seed = r.seed.map_or("-".to_string(), |s| s.to_string());
        let grid = format!("{}x{}", r.width, r.height);
        let _ = writeln!(
            out,
            "{:>5} {:>7} {:>9} {:>6} {:>6} {:>5} {:>6}",
            r.range, grid, r.strategy, r.colors, r.rounds, r.valid, seed
        );
    }
    out
}

/// One `R h det x1 y1 x2 y2 lower upper` report line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorRow {
    pub pair: VectorPair,
    pub lower: f64,
    pub upper: f64,
}

impl VectorRow {
    pub fn solve(range: Range, h: u32) -> Result<Self> {
        let pair = solve_vectors(range, h)?;
        let b = bounds(range, h, pair.det);
        Ok(VectorRow { pair, lower: b.lower, upper: b.upper })
    }

    pub fn header() -> &'static str {
        "R h det x1 y1 x2 y2 lower upper"
    }

    pub fn line(&self) -> String {
        let p = &self.pair;
        format!(
            "{} {} {} {} {} {} {} {:.4} {:.4}",
            p.range, p.hops, p.det, p.v1.0, p.v1.1, p.v2.0, p.v2.1, self.lower, self.upper
        )
    }
}

/// Determinants of the optimal generator pairs, by `(tenths, h)`.
pub const TABLE_DETERMINANTS: &[(u32, u32, u64)] = &[
    (10, 2, 5),
    (15, 2, 9),
    (20, 2, 13),
    (25, 2, 23),
    (30, 2, 33),
    (35, 2, 39),
    (40, 2, 53),
    (45, 2, 75),
    (50, 2, 94),
    (55, 2, 105),
    (60, 2, 124),
    (65, 2, 150),
    (70, 2, 166),
    (10, 3, 8),
    (15, 3, 16),
    (20, 3, 25),
    (25, 3, 45),
    (30, 3, 68),
    (35, 3, 80),
    (40, 3, 112),
    (45, 3, 157),
    (50, 3, 198),
    (55, 3, 224),
    (60, 3, 269),
    (65, 3, 323),
    (70, 3, 352),
];

/// Reference protocol runs: `(tenths, side, strategy, colors, rounds)`.
pub const TABLE_SERENA: &[(u32, u32, Strategy, usize, u32)] = &[
    (10, 10, Strategy::Line, 8, 58),
    (10, 10, Strategy::Column, 8, 58),
    (10, 10, Strategy::Vector, 8, 21),
    (10, 20, Strategy::Vector, 8, 21),
    (10, 30, Strategy::Vector, 8, 21),
    (10, 50, Strategy::Vector, 8, 21),
    (15, 10, Strategy::Line, 16, 91),
    (15, 10, Strategy::Column, 16, 91),
    (15, 10, Strategy::Vector, 16, 38),
    (15, 20, Strategy::Vector, 16, 38),
    (15, 30, Strategy::Vector, 16, 38),
    (15, 50, Strategy::Vector, 16, 38),
    (20, 10, Strategy::Line, 30, 85),
    (20, 10, Strategy::Column, 30, 85),
    (20, 10, Strategy::Vector, 25, 52),
    (20, 20, Strategy::Vector, 25, 56),
    (20, 30, Strategy::Vector, 25, 61),
    (20, 50, Strategy::Vector, 25, 68),
    (30, 20, Strategy::Vector, 68, 179),
    (30, 30, Strategy::Vector, 68, 184),
];

/// Reference color counts for other priority orders: `(tenths, side,
/// strategy, colors)`.
pub const TABLE_STRATEGIES: &[(u32, u32, Strategy, usize)] = &[
    (10, 10, Strategy::Line, 8),
    (10, 10, Strategy::Column, 8),
    (10, 10, Strategy::Diagonal, 8),
    (10, 10, Strategy::Origin, 8),
    (10, 20, Strategy::Line, 15),
    (10, 20, Strategy::Column, 15),
    (10, 20, Strategy::Diagonal, 8),
    (10, 20, Strategy::Origin, 8),
    (20, 10, Strategy::Line, 30),
    (20, 10, Strategy::Column, 30),
    (20, 10, Strategy::Diagonal, 28),
    (20, 10, Strategy::Origin, 30),
    (20, 20, Strategy::Line, 33),
    (20, 20, Strategy::Column, 33),
    (20, 20, Strategy::Diagonal, 29),
    (20, 20, Strategy::Origin, 30),
];

/// Relative tolerance on reference round counts.
pub const ROUND_TOLERANCE: f64 = 0.25;

/// Tiling color counts of the vector method: `(tenths, side, colors)`.
pub const TABLE_TILING: &[(u32, u32, usize)] = &[
    (10, 10, 8),
    (10, 20, 8),
    (10, 30, 8),
    (10, 50, 8),
    (15, 10, 16),
    (15, 20, 16),
    (15, 30, 16),
    (15, 50, 16),
    (20, 10, 25),
    (20, 20, 25),
    (20, 30, 25),
    (20, 50, 25),
    (30, 20, 68),
    (30, 30, 68),
];

#[derive(Debug, Clone, PartialEq)]
pub struct TableDiff {
    pub table: &'static str,
    pub key: String,
    pub expected: String,
    pub got: String,
    pub matches: bool,
}

impl TableDiff {
    pub fn line(&self) -> String {
        let status = if self.matches { "match" } else { "DIFF" };
        format!("{:<10} {:<24} expected {:<12} got {:<12} {status}", self.table, self.key, self.expected, self.got)
    }
}

fn range(tenths: u32) -> Range {
    Range::from_tenths(tenths).expect("table ranges are >= 1")
}

pub fn table_vectors() -> Result<Vec<TableDiff>> {
    TABLE_DETERMINANTS
        .iter()
        .map(|&(tenths, h, det)| {
            let row = VectorRow::solve(range(tenths), h)?;
            Ok(TableDiff {
                table: "vectors",
                key: format!("R={} h={h}", range(tenths)),
                expected: det.to_string(),
                got: row.pair.det.to_string(),
                matches: row.pair.det == det,
            })
        })
        .collect()
}

pub fn table_tiling() -> Result<Vec<TableDiff>> {
    TABLE_TILING
        .iter()
        .map(|&(tenths, side, colors)| {
            let spec = GridSpec::new(side, side, range(tenths))?;
            let pair = solve_vectors(spec.range, 3)?;
            let c = tile_grid(&spec, &pair)?;
            let valid = check_h_hop(&build_grid(&spec), &c, 3)?.valid;
            Ok(TableDiff {
                table: "tiling",
                key: format!("R={} {side}x{side}", spec.range),
                expected: colors.to_string(),
                got: format!("{}{}", c.color_count(), if valid { "" } else { " invalid" }),
                matches: valid && c.color_count() == colors,
            })
        })
        .collect()
}

fn within_rounds(expected: u32, got: u32) -> bool {
    (f64::from(got) - f64::from(expected)).abs() <= ROUND_TOLERANCE * f64::from(expected)
}

pub fn table_serena(cfg: SerenaConfig) -> Result<Vec<TableDiff>> {
    TABLE_SERENA
        .iter()
        .map(|&(tenths, side, strategy, colors, rounds)| {
            let spec = GridSpec::new(side, side, range(tenths))?;
            let o = run_grid(&spec, strategy, AssignOptions::default(), cfg)?;
            Ok(TableDiff {
                table: "serena",
                key: format!("R={} {side}x{side} {strategy}", spec.range),
                expected: format!("{colors} / {rounds}"),
                got: format!("{} / {}", o.row.colors, o.row.rounds),
                matches: o.row.valid && o.row.colors == colors && within_rounds(rounds, o.row.rounds),
            })
        })
        .collect()
}

pub fn table_strategies(cfg: SerenaConfig) -> Result<Vec<TableDiff>> {
    TABLE_STRATEGIES
        .iter()
        .map(|&(tenths, side, strategy, colors)| {
            let spec = GridSpec::new(side, side, range(tenths))?;
            let o = run_grid(&spec, strategy, AssignOptions::default(), cfg)?;
            Ok(TableDiff {
                table: "strategies",
                key: format!("R={} {side}x{side} {strategy}", spec.range),
                expected: colors.to_string(),
                got: o.row.colors.to_string(),
                matches: o.row.valid && o.row.colors == colors,
            })
        })
        .collect()
}
