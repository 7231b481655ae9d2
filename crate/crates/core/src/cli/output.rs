use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Format, Scenario};
use super::CliError;
use crate::spectra::SpectrumTable;

/// Rectangular numeric table. NaN marks a missing value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W, header: &[String]) -> std::io::Result<()> {
        for h in header {
            writeln!(w, "# {h}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|v| if v.is_nan() { "nan".to_string() } else { format!("{v:.12e}") })
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

impl From<&SpectrumTable> for Table {
    fn from(t: &SpectrumTable) -> Self {
        let mut columns = vec!["omega".to_string()];
        columns.extend(t.columns.iter().map(|c| c.name.clone()));
        let rows = (0..t.len())
            .map(|i| {
                std::iter::once(t.omega[i])
                    .chain(t.columns.iter().map(|c| c.values[i]))
                    .collect()
            })
            .collect();
        Self { columns, rows }
    }
}

/// Provenance carried by every artifact. No timestamps, so repeated runs
/// produce identical files.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub task: String,
    pub system: Value,
    /// Task-specific scalar results.
    pub extra: Vec<(String, Value)>,
}

impl Metadata {
    pub fn new(sc: &Scenario, task: &str) -> Self {
        let mut extra = Vec::new();
        if let Some(st) = &sc.steady {
            extra.push(("steady_state".to_string(), json!(st)));
        }
        Self {
            tool: "sasc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: sc.hash.clone(),
            task: task.into(),
            system: serde_json::to_value(&sc.model).expect("model serializes"),
            extra,
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.extra.push((key.to_string(), value));
        self
    }

    pub fn header_lines(&self) -> Vec<String> {
        let mut h = vec![
            format!("{} {}", self.tool, self.version),
            format!("config_sha256 {}", self.config_sha256),
            format!("task {}", self.task),
            format!("system {}", self.system),
        ];
        h.extend(self.extra.iter().map(|(k, v)| format!("{k} {v}")));
        h
    }

    fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("tool".into(), json!(self.tool));
        m.insert("version".into(), json!(self.version));
        m.insert("config_sha256".into(), json!(self.config_sha256));
        m.insert("task".into(), json!(self.task));
        m.insert("system".into(), self.system.clone());
        for (k, v) in &self.extra {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// Where and how artifacts of one run are written.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: PathBuf,
    pub stem: String,
    pub format: Format,
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: PathBuf, stem: String, format: Format) -> Self {
        Self {
            dir,
            stem,
            format,
            written: Vec::new(),
        }
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn path(&self, suffix: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{}{}.{}", self.stem, suffix, ext))
    }

    fn create(&mut self, path: &Path) -> Result<BufWriter<fs::File>, CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::Io(format!("{}: {e}", self.dir.display())))?;
        let f = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path.to_path_buf());
        Ok(BufWriter::new(f))
    }

    /// Writes a table as `<stem><suffix>.csv` or `.json`.
    pub fn table(&mut self, suffix: &str, meta: &Metadata, table: &Table) -> Result<(), CliError> {
        match self.format {
            Format::Csv => {
                let path = self.path(suffix, "csv");
                let mut w = self.create(&path)?;
                table
                    .write_csv(&mut w, &meta.header_lines())
                    .and_then(|_| w.flush())
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
            }
            Format::Json => self.json(suffix, meta, &json!(table)),
        }
    }

    /// Writes `{ "metadata": …, "data": … }` as `<stem><suffix>.json`.
    pub fn json(&mut self, suffix: &str, meta: &Metadata, data: &Value) -> Result<(), CliError> {
        let path = self.path(suffix, "json");
        let mut w = self.create(&path)?;
        let doc = json!({ "metadata": meta.to_json(), "data": data });
        serde_json::to_writer_pretty(&mut w, &doc)
            .map_err(|e| CliError::Io(e.to_string()))
            .and_then(|_| writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Io(e.to_string())))
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut w = self.create(&path)?;
        w.write_all(body.as_bytes())
            .and_then(|_| w.flush())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

/// Formats a number for use in a file name: `1` → `1`, `0.5` → `0.5`,
/// `-2` → `m2`.
pub fn tag(x: f64) -> String {
    let s = format!("{x}");
    s.replace('-', "m")
}
