//! Serialization of detected tables: one RFC 4180 CSV per table and one
//! combined JSON document per input.
//!
//! Output is deterministic byte-for-byte: JSON keys follow struct order and
//! nothing time- or environment-dependent is recorded. Files are written to
//! a temporary name and renamed into place so failed runs leave no partial
//! outputs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::contours::CellBox;
use crate::gridmap::TableGrid;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

/// Where and how to write.
#[derive(Debug, Clone)]
pub struct EmitConfig {
    pub format: OutputFormat,
    pub output_dir: PathBuf,
    /// Stem for all files of one input: `<base>_table<k>.csv`, `<base>.json`.
    pub base_name: String,
}

/// One table ready for serialization: the grid plus its page outline.
#[derive(Debug, Clone)]
pub struct TableRecord {
    pub grid: TableGrid,
    pub outline: CellBox,
}

/// Run parameters recorded in the JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct Parameters {
    pub binarize: String,
    pub otsu_threshold: Option<u8>,
    pub block_size: u32,
    pub offset_c: f64,
    pub kernel_divisor: u32,
    /// Directional kernel length actually used (`height / divisor`, min 1).
    pub kernel_length: u32,
    pub open_iterations: u32,
    pub line_threshold: f64,
    pub conf_threshold: f64,
    pub min_cell_area: u64,
    pub containment_slack: u32,
}

/// Provenance for the JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub source: String,
    pub parameters: Parameters,
}

#[derive(Serialize)]
struct JsonBox {
    x_min: u32,
    y_min: u32,
    x_max: u32,
    y_max: u32,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    id: usize,
    n_rows: usize,
    n_cols: usize,
    outline: JsonBox,
    rows: &'a [Vec<String>],
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    source: &'a str,
    parameters: &'a Parameters,
    tables: Vec<JsonTable<'a>>,
}

/// Renders one grid as RFC 4180 CSV: CRLF record separators, fields quoted
/// only when they contain a comma, quote, or line break.
pub fn to_csv(grid: &TableGrid) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    for row in &grid.cells {
        writer
            .write_record(row)
            .expect("in-memory CSV writes cannot fail");
    }
    writer
        .into_inner()
        .expect("in-memory CSV writer flushes cleanly")
}

/// Renders all tables of one input as a single JSON document.
pub fn to_json(records: &[TableRecord], meta: &RunMetadata) -> Vec<u8> {
    let doc = JsonDocument {
        source: &meta.source,
        parameters: &meta.parameters,
        tables: records
            .iter()
            .map(|r| JsonTable {
                id: r.grid.table_id,
                n_rows: r.grid.n_rows,
                n_cols: r.grid.n_cols,
                outline: JsonBox {
                    x_min: r.outline.x_min,
                    y_min: r.outline.y_min,
                    x_max: r.outline.x_max,
                    y_max: r.outline.y_max,
                },
                rows: &r.grid.cells,
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("document serializes");
    bytes.push(b'\n');
    bytes
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), EmitError> {
    let io_err = |source| EmitError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp_name = path
        .file_name()
        .expect("output paths have file names")
        .to_owned();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes).map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

/// Writes the configured formats and returns the paths created.
pub fn write_outputs(
    records: &[TableRecord],
    meta: &RunMetadata,
    cfg: &EmitConfig,
) -> Result<Vec<PathBuf>, EmitError> {
    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| EmitError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    if cfg.format.wants_csv() {
        for record in records {
            let path = cfg.output_dir.join(format!(
                "{}_table{}.csv",
                cfg.base_name, record.grid.table_id
            ));
            write_atomic(&path, &to_csv(&record.grid))?;
            written.push(path);
        }
    }
    if cfg.format.wants_json() {
        let path = cfg.output_dir.join(format!("{}.json", cfg.base_name));
        write_atomic(&path, &to_json(records, meta))?;
        written.push(path);
    }
    Ok(written)
}
