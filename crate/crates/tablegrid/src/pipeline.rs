//! End-to-end orchestration: load, binarize, extract the line skeleton,
//! trace and group cells, map OCR words, and emit files.
//!
//! Everything up to file emission is pure; the only side effects in the
//! crate are the file writes and the optional external OCR invocation, both
//! confined to [`run`]. Identical inputs and configuration produce
//! byte-identical outputs.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::binarize::{self, AdaptiveParams, BinarizeError, Polarity};
use crate::contours::{self, Contour, ContourKind};
use crate::emit::{
    self, EmitConfig, EmitError, OutputFormat, Parameters, RunMetadata, TableRecord,
};
use crate::gridmap::{self, RowClustering};
use crate::grouping::{self, GroupError, Grouping};
use crate::morphology::{self, Skeleton, SkeletonConfig};
use crate::ocr::{self, OcrError, OcrWord};
use crate::raster::{self, BinaryImage, GrayImage, Histogram, RasterError};

/// Which binarization feeds the line extraction.
///
/// Adaptive is the default: a single global threshold cannot handle pages
/// with non-uniform contrast, while the local mean comparison can.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinarizeMode {
    #[default]
    Adaptive,
    Otsu,
}

/// Where OCR words come from.
#[derive(Debug, Clone, Default)]
pub enum OcrSource {
    /// Precomputed word-data TSV.
    TsvPath(PathBuf),
    /// Shell command template; `{input}` is replaced with the quoted input
    /// path and stdout is parsed as word-data TSV.
    Command(String),
    /// No words: grids are emitted with table structure but empty cells.
    #[default]
    None,
}

/// Full configuration of one pipeline run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub ocr_source: OcrSource,
    pub binarize_mode: BinarizeMode,
    /// Fixed global threshold instead of the computed one (Otsu mode only).
    pub otsu_override: Option<u8>,
    pub block_size: u32,
    pub offset_c: f64,
    pub kernel_divisor: u32,
    pub open_iterations: u32,
    pub line_threshold: f64,
    pub row_clustering: RowClustering,
    pub conf_threshold: f64,
    pub min_cell_area: u64,
    pub containment_slack: u32,
    pub format: OutputFormat,
    pub output_dir: PathBuf,
    pub debug_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for every tunable; only the input path is required.
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input_path.into(),
            ocr_source: OcrSource::None,
            binarize_mode: BinarizeMode::Adaptive,
            otsu_override: None,
            block_size: 199,
            offset_c: 40.0,
            kernel_divisor: 80,
            open_iterations: 3,
            line_threshold: 10.0,
            row_clustering: RowClustering::Chained,
            conf_threshold: 30.0,
            min_cell_area: 64,
            containment_slack: 2,
            format: OutputFormat::Both,
            output_dir: PathBuf::from("."),
            debug_dir: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    /// The page contains no table. Maps to exit code 2.
    #[error("no table")]
    NoTables,
    #[error("raster: {0}")]
    Raster(#[from] RasterError),
    #[error("binarize: {0}")]
    Binarize(#[from] BinarizeError),
    #[error("ocr: {0}")]
    Ocr(#[from] OcrError),
    #[error("emit: {0}")]
    Emit(#[from] EmitError),
    #[error("ocr command exited with {status}: {stderr}")]
    OcrCommand { status: String, stderr: String },
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Intermediate images kept for debug dumps.
#[derive(Debug, Clone)]
pub struct StageArtifacts {
    pub gray: GrayImage,
    pub histogram: Histogram,
    pub binary: BinaryImage,
    pub skeleton: Skeleton,
    pub contours: Vec<Contour>,
}

/// Result of the pure part of the pipeline.
#[derive(Debug, Clone)]
pub struct ProcessOutput {
    /// One record per detected table; empty means "no table".
    pub records: Vec<TableRecord>,
    pub grouping: Grouping,
    pub stages: StageArtifacts,
    /// Directional kernel length used for this image.
    pub kernel_length: u32,
}

/// Runs detection and mapping on an in-memory image with pre-filtered words.
///
/// A constant image (no contrast under Otsu mode) is treated as having no
/// ink at all, which flows into the regular no-table outcome.
pub fn process(
    gray: &GrayImage,
    words: &[OcrWord],
    cfg: &RunConfig,
) -> Result<ProcessOutput, PipelineError> {
    let histogram = raster::histogram(gray);

    // Ink must come out as foreground: the binarization inverts the page so
    // lines sit on background.
    let binary = match cfg.binarize_mode {
        BinarizeMode::Adaptive => {
            let params = AdaptiveParams::new(cfg.block_size, cfg.offset_c)?;
            binarize::adaptive_gaussian(gray, &params, Polarity::DarkAsForeground)?
        }
        BinarizeMode::Otsu => {
            let threshold = match cfg.otsu_override {
                Some(t) => Some(t),
                None => match binarize::otsu_threshold(&histogram) {
                    Ok(result) => Some(result.threshold),
                    Err(BinarizeError::NoContrast) => None,
                    Err(other) => return Err(other.into()),
                },
            };
            match threshold {
                Some(t) => binarize::apply_threshold(gray, t, Polarity::DarkAsForeground),
                None => BinaryImage::new(gray.width(), gray.height()),
            }
        }
    };

    let skeleton_cfg = SkeletonConfig {
        divisor: cfg.kernel_divisor,
        open_iterations: cfg.open_iterations,
    };
    let skeleton = morphology::extract_skeleton(&binary, &skeleton_cfg);
    let kernel_length = (gray.height() / cfg.kernel_divisor).max(1);

    let contours = contours::find_contours(&skeleton.combined);
    let boxes = contours::to_cell_boxes(&contours, cfg.min_cell_area);
    let (outlines, cells): (Vec<_>, Vec<_>) = boxes
        .into_iter()
        .partition(|b| b.kind == ContourKind::Outer);

    let grouping = match grouping::group_tables(outlines, cells, cfg.containment_slack) {
        Ok(g) => g,
        Err(GroupError::NoTablesFound) => Grouping::empty(),
    };

    let records = grouping
        .groups
        .iter()
        .map(|group| {
            let rows = gridmap::cluster_rows(&group.cells, cfg.line_threshold, cfg.row_clustering);
            let grid = gridmap::assign_words(&rows, words, group.id);
            TableRecord {
                grid,
                outline: group.outline,
            }
        })
        .collect();

    Ok(ProcessOutput {
        records,
        grouping,
        stages: StageArtifacts {
            gray: gray.clone(),
            histogram,
            binary,
            skeleton,
            contours,
        },
        kernel_length,
    })
}

fn shell_quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

fn resolve_words(cfg: &RunConfig) -> Result<Vec<OcrWord>, PipelineError> {
    match &cfg.ocr_source {
        OcrSource::TsvPath(path) => {
            let content = std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(ocr::parse_ocr_tsv(&content)?)
        }
        OcrSource::Command(template) => {
            let command = template.replace("{input}", &shell_quote(&cfg.input_path));
            let output = std::process::Command::new("sh")
                .arg("-c")
                .arg(&command)
                .output()
                .map_err(|source| PipelineError::Io {
                    path: PathBuf::from("sh"),
                    source,
                })?;
            if !output.status.success() {
                return Err(PipelineError::OcrCommand {
                    status: output.status.to_string(),
                    stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
                });
            }
            let stdout = String::from_utf8_lossy(&output.stdout);
            Ok(ocr::parse_ocr_tsv(&stdout)?)
        }
        OcrSource::None => Ok(Vec::new()),
    }
}

/// Summary of a completed run.
#[derive(Debug)]
pub struct RunSummary {
    pub records: Vec<TableRecord>,
    pub written: Vec<PathBuf>,
    pub orphan_cells: usize,
    pub absorbed_outlines: usize,
    /// Non-fatal problems while writing debug artifacts.
    pub debug_warnings: Vec<String>,
}

fn metadata_for(cfg: &RunConfig, kernel_length: u32) -> RunMetadata {
    RunMetadata {
        source: cfg.input_path.display().to_string(),
        parameters: Parameters {
            binarize: match cfg.binarize_mode {
                BinarizeMode::Adaptive => "adaptive".into(),
                BinarizeMode::Otsu => "otsu".into(),
            },
            otsu_threshold: cfg.otsu_override,
            block_size: cfg.block_size,
            offset_c: cfg.offset_c,
            kernel_divisor: cfg.kernel_divisor,
            kernel_length,
            open_iterations: cfg.open_iterations,
            line_threshold: cfg.line_threshold,
            conf_threshold: cfg.conf_threshold,
            min_cell_area: cfg.min_cell_area,
            containment_slack: cfg.containment_slack,
        },
    }
}

/// Full run: load the image, resolve OCR words, process, dump optional debug
/// artifacts, and emit output files.
///
/// No output files are written when no table is found; debug artifacts are
/// written (best effort) whenever a debug directory is configured, since
/// they exist to diagnose exactly such runs.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, PipelineError> {
    let bytes = std::fs::read(&cfg.input_path).map_err(|source| PipelineError::Io {
        path: cfg.input_path.clone(),
        source,
    })?;
    let gray = raster::load_image(&bytes)?;
    let words = resolve_words(cfg)?;
    let filtered = ocr::filter_confidence(&words, cfg.conf_threshold);

    let output = process(&gray, &filtered, cfg)?;

    let debug_warnings = match &cfg.debug_dir {
        Some(dir) => dump_debug(&output, dir),
        None => Vec::new(),
    };

    if output.records.is_empty() {
        return Err(PipelineError::NoTables);
    }

    let base_name = cfg
        .input_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    let written = emit::write_outputs(
        &output.records,
        &metadata_for(cfg, output.kernel_length),
        &EmitConfig {
            format: cfg.format,
            output_dir: cfg.output_dir.clone(),
            base_name,
        },
    )?;

    Ok(RunSummary {
        records: output.records,
        written,
        orphan_cells: output.grouping.orphan_cells,
        absorbed_outlines: output.grouping.absorbed_outlines,
        debug_warnings,
    })
}

/// Writes the stage images and histogram into `dir`.
///
/// Failures are collected as warnings instead of aborting the run.
pub fn dump_debug(output: &ProcessOutput, dir: &Path) -> Vec<String> {
    let mut warnings = Vec::new();
    if let Err(e) = std::fs::create_dir_all(dir) {
        warnings.push(format!("debug dir {}: {e}", dir.display()));
        return warnings;
    }
    let mut write = |name: &str, bytes: Vec<u8>| {
        if let Err(e) = std::fs::write(dir.join(name), bytes) {
            warnings.push(format!("debug {name}: {e}"));
        }
    };

    let stages = &output.stages;
    write("01_gray.pgm", raster::write_pgm(&stages.gray));
    write(
        "02_binary.pgm",
        raster::write_pgm(&stages.binary.to_gray(255, 0)),
    );
    write(
        "03_vertical.pgm",
        raster::write_pgm(&stages.skeleton.vertical.to_gray(255, 0)),
    );
    write(
        "04_horizontal.pgm",
        raster::write_pgm(&stages.skeleton.horizontal.to_gray(255, 0)),
    );
    write(
        "05_skeleton.pgm",
        raster::write_pgm(&stages.skeleton.combined.to_gray(255, 0)),
    );

    let mut border_marks = BinaryImage::new(stages.gray.width(), stages.gray.height());
    for contour in &stages.contours {
        for p in &contour.points {
            border_marks.set(p.x, p.y, true);
        }
    }
    write(
        "06_contours.pgm",
        raster::write_pgm(&border_marks.to_gray(255, 0)),
    );

    // Label image: every cell of group k is filled with intensity k.
    let mut labels = GrayImage::filled(stages.gray.width(), stages.gray.height(), 0);
    for group in &output.grouping.groups {
        let value = group.id.min(255) as u8;
        for cell in &group.cells {
            for y in cell.y_min..=cell.y_max {
                for x in cell.x_min..=cell.x_max {
                    labels.set(x, y, value);
                }
            }
        }
    }
    write("07_groups.pgm", raster::write_pgm(&labels));

    let mut hist_text = String::with_capacity(1024);
    for count in output.stages.histogram.bins.iter() {
        hist_text.push_str(&count.to_string());
        hist_text.push('\n');
    }
    write("histogram.txt", hist_text.into_bytes());

    warnings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{self, PageSpec, RenderOptions, TableSpec};

    fn sample_specs() -> Vec<TableSpec> {
        let texts1 = [
            vec!["Date", "Fruit", "Price"],
            vec!["Jan 3", "Apple", "7.9"],
        ];
        let texts2 = [vec!["Course", "Hours"], vec!["Soft Computing", "35 hours"]];
        vec![
            TableSpec {
                origin: (60, 60),
                col_widths: vec![110; 3],
                row_heights: vec![44; 2],
                line_width: 2,
                cell_texts: texts1
                    .iter()
                    .map(|r| r.iter().map(|s| s.to_string()).collect())
                    .collect(),
                seed: 1,
            },
            TableSpec {
                origin: (60, 260),
                col_widths: vec![150, 110],
                row_heights: vec![44; 2],
                line_width: 2,
                cell_texts: texts2
                    .iter()
                    .map(|r| r.iter().map(|s| s.to_string()).collect())
                    .collect(),
                seed: 2,
            },
        ]
    }

    #[test]
    fn processes_two_tables_end_to_end() {
        let page = PageSpec {
            width: 640,
            height: 480,
            ink: 0,
            paper_bg: 255,
        };
        let opts = RenderOptions {
            text_strokes: true,
            gradient: None,
        };
        let (img, gt) = synth::render(&sample_specs(), &page, &opts).unwrap();
        let tsv = synth::emit_ocr_tsv(&gt);
        let words = crate::ocr::parse_ocr_tsv(&tsv).unwrap();

        let cfg = RunConfig::new("unused.pgm");
        let out = process(&img, &words, &cfg).unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.records[0].grid.cells, gt.tables[0].expected_texts());
        assert_eq!(out.records[1].grid.cells, gt.tables[1].expected_texts());
        assert_eq!(out.kernel_length, 6);
    }

    #[test]
    fn blank_page_yields_no_records() {
        let img = GrayImage::filled(400, 300, 255);
        let out = process(&img, &[], &RunConfig::new("x")).unwrap();
        assert!(out.records.is_empty());
        assert!(out.stages.skeleton.is_empty());
    }

    #[test]
    fn otsu_mode_on_constant_image_falls_back_to_no_table() {
        let img = GrayImage::filled(400, 300, 180);
        let mut cfg = RunConfig::new("x");
        cfg.binarize_mode = BinarizeMode::Otsu;
        let out = process(&img, &[], &cfg).unwrap();
        assert!(out.records.is_empty());
    }

    #[test]
    fn missing_input_is_an_io_error() {
        let cfg = RunConfig::new("/nonexistent/input.pgm");
        match run(&cfg) {
            Err(PipelineError::Io { .. }) => {}
            other => panic!("expected io error, got {other:?}"),
        }
    }

    #[test]
    fn debug_dump_writes_manifest() {
        let page = PageSpec {
            width: 640,
            height: 480,
            ink: 0,
            paper_bg: 255,
        };
        let (img, gt) = synth::render(&sample_specs(), &page, &RenderOptions::default()).unwrap();
        let words = crate::ocr::parse_ocr_tsv(&synth::emit_ocr_tsv(&gt)).unwrap();
        let out = process(&img, &words, &RunConfig::new("x")).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let warnings = dump_debug(&out, dir.path());
        assert!(warnings.is_empty(), "{warnings:?}");
        for name in [
            "01_gray.pgm",
            "02_binary.pgm",
            "03_vertical.pgm",
            "04_horizontal.pgm",
            "05_skeleton.pgm",
            "06_contours.pgm",
            "07_groups.pgm",
            "histogram.txt",
        ] {
            assert!(dir.path().join(name).exists(), "missing {name}");
        }

        // The combined mask is exactly the OR of the directional masks.
        let v = raster::load_image_path(dir.path().join("03_vertical.pgm")).unwrap();
        let h = raster::load_image_path(dir.path().join("04_horizontal.pgm")).unwrap();
        let s = raster::load_image_path(dir.path().join("05_skeleton.pgm")).unwrap();
        for ((pv, ph), ps) in v.pixels().iter().zip(h.pixels()).zip(s.pixels()) {
            assert_eq!(*pv == 255 || *ph == 255, *ps == 255);
        }

        let hist_lines = std::fs::read_to_string(dir.path().join("histogram.txt"))
            .unwrap()
            .lines()
            .count();
        assert_eq!(hist_lines, 256);
    }
}
