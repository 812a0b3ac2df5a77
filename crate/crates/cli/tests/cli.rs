use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lightspeed::grid::{FieldMap, GridSpec};
use lightspeed_cli::{
    emit_fieldmap, parse_fieldmap_json, Format, Provenance, RunConfig, TableDocument,
    EXIT_INVALID_CONFIG, EXIT_QUADRATURE, EXIT_REGIME, FIELD_COLUMNS,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lightspeed"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn bounds_json_has_all_seven_entries() {
    let doc: TableDocument = serde_json::from_str(&stdout(&["bounds", "--format", "json"])).unwrap();
    for (name, entry) in doc.entries() {
        let entry = entry.unwrap_or_else(|| panic!("{name} missing"));
        assert!(entry.delta_c > 0.0, "{name}");
    }
    assert_eq!(doc.provenance.seed, 42);
    assert_eq!(doc.provenance.config_sha256, RunConfig::reference().sha256());
}

#[test]
fn lossless_config_leaves_lossy_entries_null() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "c.json", r#"{"cavity_length": 1000.0, "wavelength": 5e-7}"#);
    let out = run(&["--config", path.to_str().unwrap(), "bounds", "--format", "json"]);
    assert!(out.status.success());
    let doc: TableDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.optimal_lossy.is_none() && doc.coherent_lossy.is_none());
    assert!(doc.optimal_lossless.is_some() && doc.ng00.is_some());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = stdout(&["bounds", "--format", "json"]);
    let b = stdout(&["bounds", "--format", "json"]);
    assert_eq!(a, b);
    let a = stdout(&["field-map", "--grid", "3", "--format", "json"]);
    let b = stdout(&["field-map", "--grid", "3", "--format", "json", "--threads", "2"]);
    assert_eq!(a, b);
}

#[test]
fn empty_grid_gives_header_only_csv() {
    let csv = stdout(&["field-map", "--grid", "0"]);
    assert_eq!(data_lines(&csv), vec![FIELD_COLUMNS.join(",")]);
}

#[test]
fn field_map_json_round_trips() {
    let json = stdout(&["field-map", "--grid", "2x3x2", "--format", "json"]);
    let doc = parse_fieldmap_json(&json).unwrap();
    assert_eq!(doc.rows.len(), 12);
    assert_eq!(doc.grid.shape(), [2, 3, 2]);
    assert_eq!(doc.unconverged, 0);
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(parse_fieldmap_json(&again).unwrap().rows, doc.rows);

    let csv = stdout(&["field-map", "--grid", "2x3x2"]);
    let rows = data_lines(&csv);
    for (line, row) in rows[1..].iter().zip(&doc.rows) {
        let h00: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(h00, row.h00);
    }
}

#[test]
fn large_zero_map_has_one_line_per_node() {
    let grid = GridSpec::cube(0.0, 3.0, 48);
    let map = FieldMap::zeros(grid, &FIELD_COLUMNS[3..11]);
    let provenance = Provenance::new(&RunConfig::reference(), serde_json::json!({"name": "test"}));
    let csv = emit_fieldmap(&map, Format::Csv, &provenance).unwrap();
    assert_eq!(data_lines(&csv).len(), 48 * 48 * 48 + 1);
    assert!(csv.starts_with("# tool: lightspeed"));
}

#[test]
fn unknown_config_key_exits_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "bad.json",
        r#"{"cavity_length": 1000.0, "wavelength": 5e-7, "colour": "blue"}"#,
    );
    let out = run(&["--config", path.to_str().unwrap(), "bounds"]);
    assert_eq!(out.status.code(), Some(EXIT_INVALID_CONFIG as i32));
}

#[test]
fn point_on_the_source_exits_with_config_status() {
    let out = run(&["kernel", "--point", "1.0,0,0"]);
    assert_eq!(out.status.code(), Some(EXIT_INVALID_CONFIG as i32));
}

#[test]
fn strict_regime_violation_exits_three() {
    let out = run(&["validate", "--n", "1e60", "--strict"]);
    assert_eq!(out.status.code(), Some(EXIT_REGIME as i32));
    // without --strict the violation is only reported
    let out = run(&["validate", "--n", "1e60"]);
    assert!(out.status.success());
}

#[test]
fn unconverged_quadrature_exits_four_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "q.json",
        r#"{"cavity_length": 1000.0, "wavelength": 5e-7,
            "quadrature": {"tolerance": 1e-13, "max_depth": 1}}"#,
    );
    let out_path = dir.path().join("map.csv");
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "field-map",
        "--grid",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_QUADRATURE as i32));
    let csv = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(data_lines(&csv).len(), 9);
}

#[test]
fn reference_photon_number_passes_validation() {
    let text = stdout(&["validate", "--n", "1e26", "--strict"]);
    assert!(text.contains("weak_field_ok                            true"), "{text}");
    assert!(!text.contains("false"));
}
