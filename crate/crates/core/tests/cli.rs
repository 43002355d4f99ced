use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hopcolor::experiment::{rows_from_csv, rows_to_csv};
use hopcolor::vector::fixture_patterns;
use hopcolor::{build_grid, GridSpec};

fn hopcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopcolor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn csv_row(args: &[&str]) -> hopcolor::experiment::ExperimentRow {
    let o = hopcolor(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows = rows_from_csv(&text).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows_to_csv(&rows).unwrap(), text);
    rows.into_iter().next().unwrap()
}

#[test]
fn serena_vector_priority_on_30x30() {
    let row = csv_row(&["serena", "--grid", "30x30", "--range", "1", "--prio", "vector", "--format", "csv"]);
    assert_eq!(row.colors, 8);
    assert!(row.valid);
}

#[test]
fn serena_random_is_seed_determined() {
    let args = ["serena", "--grid", "10x10", "--range", "1", "--prio", "random", "--seed", "7", "--format", "csv"];
    let a = csv_row(&args);
    assert_eq!(a, csv_row(&args));
    assert!(a.valid);
    assert_eq!(a.seed, Some(7));
    let other =
        hopcolor(&["serena", "--grid", "10x10", "--range", "1", "--prio", "random", "--seed", "8", "--format", "csv"]);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn serena_single_node() {
    let row = csv_row(&["serena", "--grid", "1x1", "--range", "1", "--prio", "line", "--format", "csv"]);
    assert_eq!((row.colors, row.rounds), (1, 1));
}

#[test]
fn serena_text_output_is_aligned() {
    let o = hopcolor(&["serena", "--grid", "5x5", "--range", "1.5", "--prio", "diagonal"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].len(), lines[1].len());
}

#[test]
fn serena_guard_trip_dumps_the_trace() {
    let o = hopcolor(&["serena", "--grid", "10x10", "--range", "1", "--prio", "line", "--max-rounds", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("round 1 "), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hopcolor(&["serena", "--grid", "ten", "--range", "1"]).status.code(), Some(2));
    assert_eq!(hopcolor(&["serena", "--grid", "3x3", "--range", "1", "--prio", "random"]).status.code(), Some(2));
    assert_eq!(hopcolor(&["vector", "--range", "0.5", "--hops", "3"]).status.code(), Some(2));
}

#[test]
fn vector_reports() {
    let o = hopcolor(&["vector", "--range", "3", "--hops", "3"]);
    let text = stdout(&o);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(' ').collect();
    assert_eq!(fields.len(), 9);
    assert_eq!(fields[2], "68");
    assert!(stdout(&hopcolor(&["vector", "--range", "1", "--hops", "2"]))
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("1 2 5 "));
    let o = hopcolor(&["vector", "--range", "1", "--hops", "1", "--tile", "4x4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid true"));
}

#[test]
fn reduce_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gprime.txt");
    let o = hopcolor(&["reduce", &fixture("triangle.txt"), "--hops", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("m=7 "), "{text}");
    for part in ["C1=ok", "C2=ok", "C3=ok", "equivalence=ok"] {
        assert!(text.contains(part), "{text}");
    }
    let g = hopcolor::Topology::parse_text(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.len(), 10);
    let sidecar = std::fs::read_to_string(PathBuf::from(format!("{}.sidecar", out.display()))).unwrap();
    assert_eq!(sidecar.lines().count(), 7);
    assert!(sidecar.lines().last().unwrap().ends_with("u0"));

    assert_eq!(hopcolor(&["reduce", &fixture("triangle.txt"), "--hops", "1"]).status.code(), Some(2));
}

#[test]
fn reduce_even_hops() {
    for h in ["4", "6"] {
        let o = hopcolor(&["reduce", &fixture("house.txt"), "--hops", h]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("C1=ok C2=ok C3=ok"));
    }
}

#[test]
fn reduce_reports_the_bad_line() {
    let o = hopcolor(&["reduce", &fixture("malformed.txt"), "--hops", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 4"));
}

#[test]
fn check_fixture_pattern_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GridSpec::new(10, 10, "1".parse().unwrap()).unwrap();
    let (_, pattern) = fixture_patterns().into_iter().next().unwrap();
    let coloring = pattern.tile(&spec).unwrap();
    let topo = dir.path().join("grid.txt");
    let good = dir.path().join("good.txt");
    std::fs::write(&topo, build_grid(&spec).to_text()).unwrap();
    std::fs::write(&good, coloring.to_text()).unwrap();
    let o = hopcolor(&["check", topo.to_str().unwrap(), good.to_str().unwrap(), "--hops", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut bad = coloring.clone();
    bad.insert(hopcolor::NodeId(1), coloring.get(hopcolor::NodeId(0)).unwrap());
    let bad_path = dir.path().join("bad.txt");
    std::fs::write(&bad_path, bad.to_text()).unwrap();
    let o = hopcolor(&["check", topo.to_str().unwrap(), bad_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("conflict 0 1 hops 1"));
}

#[test]
fn check_all_distinct_beyond_the_diameter() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("path.txt");
    let colors = dir.path().join("colors.txt");
    std::fs::write(&topo, std::fs::read_to_string(fixture("house.txt")).unwrap()).unwrap();
    std::fs::write(&colors, "colors 5\n0 0\n1 1\n2 2\n3 3\n4 4\n").unwrap();
    let o = hopcolor(&["check", topo.to_str().unwrap(), colors.to_str().unwrap(), "--hops", "9"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn serena_writes_checkable_files() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("t.txt");
    let col = dir.path().join("c.txt");
    let o = hopcolor(&[
        "serena",
        "--grid",
        "8x6",
        "--range",
        "2",
        "--prio",
        "center",
        "--topology-out",
        topo.to_str().unwrap(),
        "--coloring-out",
        col.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = hopcolor(&["check", topo.to_str().unwrap(), col.to_str().unwrap(), "--hops", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn tables_vectors_all_match() {
    let o = hopcolor(&["tables", "--only", "vectors"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.ends_with("26 rows, 0 differ\n"), "{text}");
}
