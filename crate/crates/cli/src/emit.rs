//! CSV, JSON and text renderers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use lightspeed::bounds::{ScalingTable, TradeoffSolution};
use lightspeed::grid::{FieldMap, GridSpec};

use crate::config::{Format, RunConfig};
use crate::{CliError, Result};

/// Column order of field-map files.
pub const FIELD_COLUMNS: [&str; 12] = [
    "xi", "eta", "zeta", "h00", "h11", "h22", "h33", "h23", "dcx", "dcy", "dcz", "err",
];

/// What produced an output file, enough to run it again.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    /// Subcommand and its numeric options.
    pub command: serde_json::Value,
    pub seed: u64,
    pub config_sha256: String,
    pub config: RunConfig,
}

impl Provenance {
    pub fn new(config: &RunConfig, command: serde_json::Value) -> Self {
        Self {
            tool: "lightspeed".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            seed: config.seed,
            config_sha256: config.sha256(),
            config: config.canonical(),
        }
    }

    /// `# key: value` lines for CSV and text files.
    fn comment_lines(&self) -> String {
        let mut out = String::new();
        let config = serde_json::to_string(&self.config).expect("config serializes");
        let _ = writeln!(out, "# tool: {} {}", self.tool, self.version);
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# config_sha256: {}", self.config_sha256);
        let _ = writeln!(out, "# config: {config}");
        out
    }
}

/// `v` rounded to nine significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.8e}").parse().expect("formatted float parses")
}

fn fmt_sig(v: f64) -> String {
    format!("{v:.8e}")
}

/// One grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub xi: f64,
    pub eta: f64,
    pub zeta: f64,
    pub h00: f64,
    pub h11: f64,
    pub h22: f64,
    pub h33: f64,
    pub h23: f64,
    pub dcx: f64,
    pub dcy: f64,
    pub dcz: f64,
    pub err: f64,
}

impl FieldRow {
    fn values(&self) -> [f64; 12] {
        [
            self.xi, self.eta, self.zeta, self.h00, self.h11, self.h22, self.h33, self.h23,
            self.dcx, self.dcy, self.dcz, self.err,
        ]
    }
}

/// JSON layout of a field map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMapDocument {
    pub provenance: Provenance,
    pub units: String,
    pub amplitude: f64,
    pub grid: GridSpec,
    pub unconverged: usize,
    pub metadata: BTreeMap<String, String>,
    pub rows: Vec<FieldRow>,
}

fn field_rows(map: &FieldMap) -> Result<Vec<FieldRow>> {
    map.check()?;
    let column = |name: &str| {
        map.component(name)
            .ok_or_else(|| CliError::MissingComponent(name.to_string()))
    };
    let [h00, h11, h22, h33, h23, dcx, dcy, dcz] = [
        column("h00")?,
        column("h11")?,
        column("h22")?,
        column("h33")?,
        column("h23")?,
        column("dcx")?,
        column("dcy")?,
        column("dcz")?,
    ];
    Ok((0..map.grid.len())
        .map(|n| {
            let [xi, eta, zeta] = map.grid.point(n);
            FieldRow {
                xi: round_sig(xi),
                eta: round_sig(eta),
                zeta: round_sig(zeta),
                h00: round_sig(h00[n]),
                h11: round_sig(h11[n]),
                h22: round_sig(h22[n]),
                h33: round_sig(h33[n]),
                h23: round_sig(h23[n]),
                dcx: round_sig(dcx[n]),
                dcy: round_sig(dcy[n]),
                dcz: round_sig(dcz[n]),
                err: round_sig(map.error[n]),
            }
        })
        .collect())
}

/// Render a metric field map. CSV starts with `#` provenance lines followed
/// by the header and one row per node; JSON carries the same keys per row.
pub fn emit_fieldmap(map: &FieldMap, format: Format, provenance: &Provenance) -> Result<String> {
    let rows = field_rows(map)?;
    match format {
        Format::Csv => {
            let mut out = provenance.comment_lines();
            let _ = writeln!(out, "# units: {}", map.units);
            let _ = writeln!(out, "# amplitude: {}", fmt_sig(map.amplitude));
            let _ = writeln!(out, "# unconverged: {}", map.unconverged);
            for (k, v) in &map.metadata {
                let _ = writeln!(out, "# {k}: {v}");
            }
            out.push_str(&FIELD_COLUMNS.join(","));
            out.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.values().iter().map(|v| fmt_sig(*v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let doc = FieldMapDocument {
                provenance: provenance.clone(),
                units: map.units.clone(),
                amplitude: round_sig(map.amplitude),
                grid: map.grid,
                unconverged: map.unconverged,
                metadata: map.metadata.clone(),
                rows,
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Text => Err(CliError::UnsupportedFormat {
            format,
            what: "field maps",
        }),
    }
}

/// Read back a JSON field map.
pub fn parse_fieldmap_json(text: &str) -> Result<FieldMapDocument> {
    Ok(serde_json::from_str(text)?)
}

/// One cell pair of the scaling table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub delta_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_opt: Option<f64>,
}

impl TableEntry {
    fn from_solution(s: &TradeoffSolution) -> Self {
        Self {
            delta_c: round_sig(s.delta_c_min),
            n_opt: Some(round_sig(s.n_opt)),
        }
    }

    fn bound(delta_c: f64) -> Self {
        Self {
            delta_c: round_sig(delta_c),
            n_opt: None,
        }
    }
}

/// JSON layout of the scaling table; lossy entries are `null` without a finesse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub provenance: Provenance,
    pub optimal_lossless: Option<TableEntry>,
    pub optimal_lossy: Option<TableEntry>,
    pub coherent_lossless: Option<TableEntry>,
    pub coherent_lossy: Option<TableEntry>,
    pub ng00: Option<TableEntry>,
    pub ac_eq3: Option<TableEntry>,
    pub ac_eq5: Option<TableEntry>,
}

impl TableDocument {
    pub fn new(table: &ScalingTable, provenance: &Provenance) -> Self {
        Self {
            provenance: provenance.clone(),
            optimal_lossless: Some(TableEntry::from_solution(&table.optimal_lossless)),
            optimal_lossy: table.optimal_lossy.as_ref().map(TableEntry::from_solution),
            coherent_lossless: Some(TableEntry::from_solution(&table.coherent_lossless)),
            coherent_lossy: table.coherent_lossy.as_ref().map(TableEntry::from_solution),
            ng00: Some(TableEntry::bound(table.comparison.ng00)),
            ac_eq3: Some(TableEntry::bound(table.comparison.ac_eq3)),
            ac_eq5: Some(TableEntry::bound(table.comparison.ac_eq5)),
        }
    }

    /// Entries in table order with their column labels.
    pub fn entries(&self) -> [(&'static str, Option<TableEntry>); 7] {
        [
            ("optimal_lossless", self.optimal_lossless),
            ("optimal_lossy", self.optimal_lossy),
            ("coherent_lossless", self.coherent_lossless),
            ("coherent_lossy", self.coherent_lossy),
            ("ng00", self.ng00),
            ("ac_eq3", self.ac_eq3),
            ("ac_eq5", self.ac_eq5),
        ]
    }
}

fn render_table_text(doc: &TableDocument) -> String {
    const HEAD: [(&str, &str); 7] = [
        ("optimal", "lossless"),
        ("optimal", "lossy"),
        ("coherent", "lossless"),
        ("coherent", "lossy"),
        ("Ng00", "dL/L"),
        ("AC eq.3", "dL/L"),
        ("AC eq.5", "dL/L"),
    ];
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
    let entries = doc.entries();
    let mut out = doc.provenance.comment_lines();
    let mut line = |label: &str, cells: Vec<String>| {
        let _ = write!(out, "{label:<12}");
        for c in cells {
            let _ = write!(out, "{c:>13}");
        }
        out.push('\n');
    };
    line("", HEAD.iter().map(|h| h.0.to_string()).collect());
    line("", HEAD.iter().map(|h| h.1.to_string()).collect());
    line("delta c/c", entries.iter().map(|(_, e)| cell(e.map(|e| e.delta_c))).collect());
    line(
        "n_opt",
        entries
            .iter()
            .map(|(_, e)| match e {
                Some(TableEntry { n_opt: None, .. }) => String::new(),
                _ => cell(e.and_then(|e| e.n_opt)),
            })
            .collect(),
    );
    out
}

/// Render the scaling table as JSON or as an aligned text table.
pub fn emit_table(table: &ScalingTable, format: Format, provenance: &Provenance) -> Result<String> {
    let doc = TableDocument::new(table, provenance);
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&doc)? + "\n"),
        Format::Text => Ok(render_table_text(&doc)),
        Format::Csv => Err(CliError::UnsupportedFormat {
            format,
            what: "the scaling table",
        }),
    }
}

/// Round every float inside a JSON value to nine significant digits.
fn round_json(value: &mut serde_json::Value) {
    use serde_json::Value;
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn flatten_json(prefix: &str, value: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_json(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten_json(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix:<40} {other}");
        }
    }
}

/// Render a serializable result as `{provenance, result}` JSON or as
/// `key value` text lines.
pub fn emit_report<T: Serialize>(result: &T, format: Format, provenance: &Provenance) -> Result<String> {
    let mut value = serde_json::to_value(result)?;
    round_json(&mut value);
    match format {
        Format::Json => {
            let doc = serde_json::json!({ "provenance": provenance, "result": value });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Text => {
            let mut out = provenance.comment_lines();
            flatten_json("", &value, &mut out);
            Ok(out)
        }
        Format::Csv => Err(CliError::UnsupportedFormat {
            format,
            what: "this report",
        }),
    }
}

/// Both sides of the trade-off at one photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub n: f64,
    pub optimal: f64,
    pub coherent: f64,
    pub coherent_asymptotic: f64,
    pub backaction: f64,
}

/// Column order of trade-off sweep files.
pub const TRADEOFF_COLUMNS: [&str; 5] = ["n", "optimal", "coherent", "coherent_asymptotic", "backaction"];

/// Render a photon-number sweep. CSV holds the curves only; JSON and text
/// also carry the crossing points.
pub fn emit_tradeoff(
    curve: &[TradeoffPoint],
    solutions: &[TradeoffSolution],
    format: Format,
    provenance: &Provenance,
) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = provenance.comment_lines();
            out.push_str(&TRADEOFF_COLUMNS.join(","));
            out.push('\n');
            for p in curve {
                let cells = [p.n, p.optimal, p.coherent, p.coherent_asymptotic, p.backaction];
                let cells: Vec<String> = cells.iter().map(|v| fmt_sig(*v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => emit_report(
            &serde_json::json!({ "solutions": solutions, "curve": curve }),
            format,
            provenance,
        ),
        Format::Text => emit_report(&serde_json::json!({ "solutions": solutions }), format, provenance),
    }
}

/// Write `contents` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, contents).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(contents.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265e0");
        assert_eq!(round_sig(1.234_567_891_23e-40), 1.234_567_89e-40);
        assert_eq!(round_sig(0.0), 0.0);
        assert!(round_sig(f64::NAN).is_nan());
    }
}
