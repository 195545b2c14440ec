//! Command-line front end: one pipeline run per input image.
//!
//! Exit codes: 0 when every input produced at least one table, 2 when any
//! input had none (message `no table`), 1 on any error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tablegrid::pipeline::{run, BinarizeMode, OcrSource, PipelineError, RunConfig};
use tablegrid::{OutputFormat, RowClustering};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BinarizeArg {
    Adaptive,
    Otsu,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClusteringArg {
    Chained,
    Anchored,
}

/// Detects bordered tables in scanned document images and writes each one as
/// CSV and/or JSON. Inputs are binary PGM (P5) or PPM (P6) files; OCR words
/// come from a precomputed TSV (--ocr-tsv) or from the command template in
/// the TABLEGRID_OCR_CMD environment variable ({input} is replaced with the
/// image path).
#[derive(Debug, Parser)]
#[command(name = "tablegrid", version)]
struct Cli {
    /// Input images (PGM P5 / PPM P6, maxval 255).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Precomputed OCR word-data TSV (single input only).
    #[arg(long)]
    ocr_tsv: Option<PathBuf>,

    /// Binarization feeding the line extraction.
    #[arg(long, value_enum, default_value_t = BinarizeArg::Adaptive)]
    binarize: BinarizeArg,

    /// Fixed global threshold (1-255) instead of the computed one; implies
    /// --binarize=otsu semantics for the threshold step.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
    otsu_threshold: Option<u8>,

    /// Adaptive window size (odd, >= 3).
    #[arg(long, default_value_t = 199)]
    block_size: u32,

    /// Offset subtracted from the adaptive local mean.
    #[arg(long, default_value_t = 40.0)]
    offset_c: f64,

    /// Line kernel length is image_height / this divisor (min 1).
    #[arg(long, default_value_t = 80)]
    kernel_divisor: u32,

    /// Erosion/dilation repetitions per directional opening.
    #[arg(long, default_value_t = 3)]
    open_iterations: u32,

    /// Row clustering gap in pixels.
    #[arg(long, default_value_t = 10.0)]
    line_threshold: f64,

    /// How row gaps are measured.
    #[arg(long, value_enum, default_value_t = ClusteringArg::Chained)]
    row_clustering: ClusteringArg,

    /// Minimum OCR word confidence.
    #[arg(long, default_value_t = 30.0)]
    conf_threshold: f64,

    /// Contour boxes smaller than this many square pixels are dropped.
    #[arg(long, default_value_t = 64)]
    min_cell_area: u64,

    /// Cell-in-table containment tolerance in pixels.
    #[arg(long, default_value_t = 2)]
    containment_slack: u32,

    /// Output formats to write.
    #[arg(long, value_enum, default_value_t = FormatArg::Both)]
    format: FormatArg,

    /// Directory for CSV/JSON outputs.
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,

    /// Write per-stage debug images and the histogram here.
    #[arg(long)]
    debug_dir: Option<PathBuf>,
}

fn config_for(cli: &Cli, input: &Path) -> RunConfig {
    let ocr_source = match &cli.ocr_tsv {
        Some(path) => OcrSource::TsvPath(path.clone()),
        None => match std::env::var("TABLEGRID_OCR_CMD") {
            Ok(template) if !template.trim().is_empty() => OcrSource::Command(template),
            _ => OcrSource::None,
        },
    };
    let mut cfg = RunConfig::new(input.to_path_buf());
    cfg.ocr_source = ocr_source;
    cfg.binarize_mode = match (cli.binarize, cli.otsu_threshold) {
        (BinarizeArg::Adaptive, None) => BinarizeMode::Adaptive,
        // A fixed threshold only makes sense for the global mode.
        (_, Some(_)) | (BinarizeArg::Otsu, _) => BinarizeMode::Otsu,
    };
    cfg.otsu_override = cli.otsu_threshold;
    cfg.block_size = cli.block_size;
    cfg.offset_c = cli.offset_c;
    cfg.kernel_divisor = cli.kernel_divisor;
    cfg.open_iterations = cli.open_iterations;
    cfg.line_threshold = cli.line_threshold;
    cfg.row_clustering = match cli.row_clustering {
        ClusteringArg::Chained => RowClustering::Chained,
        ClusteringArg::Anchored => RowClustering::Anchored,
    };
    cfg.conf_threshold = cli.conf_threshold;
    cfg.min_cell_area = cli.min_cell_area;
    cfg.containment_slack = cli.containment_slack;
    cfg.format = match cli.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Both => OutputFormat::Both,
    };
    cfg.output_dir = cli.output_dir.clone();
    cfg.debug_dir = cli.debug_dir.clone();
    cfg
}

fn validate(cli: &Cli) -> Result<(), String> {
    if cli.inputs.len() > 1 && cli.ocr_tsv.is_some() {
        return Err("--ocr-tsv applies to a single input image".into());
    }
    if cli.kernel_divisor == 0 {
        return Err("--kernel-divisor must be positive".into());
    }
    if cli.open_iterations == 0 {
        return Err("--open-iterations must be positive".into());
    }
    if cli.line_threshold <= 0.0 {
        return Err("--line-threshold must be positive".into());
    }
    if cli.block_size < 3 || cli.block_size.is_multiple_of(2) {
        return Err("--block-size must be odd and at least 3".into());
    }
    if !(0.0..=100.0).contains(&cli.conf_threshold) {
        return Err("--conf-threshold must be in [0, 100]".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = validate(&cli) {
        eprintln!("tablegrid: {message}");
        return ExitCode::from(1);
    }

    let mut any_error = false;
    let mut any_empty = false;
    for input in &cli.inputs {
        let cfg = config_for(&cli, input);
        match run(&cfg) {
            Ok(summary) => {
                for warning in &summary.debug_warnings {
                    eprintln!("tablegrid: warning: {warning}");
                }
                if summary.orphan_cells > 0 {
                    eprintln!(
                        "tablegrid: warning: {} cell(s) outside any table outline",
                        summary.orphan_cells
                    );
                }
                if summary.absorbed_outlines > 0 {
                    eprintln!(
                        "tablegrid: warning: {} nested outline(s) absorbed into enclosing tables",
                        summary.absorbed_outlines
                    );
                }
                println!("{}: {} table(s)", input.display(), summary.records.len());
                for path in &summary.written {
                    println!("  {}", path.display());
                }
            }
            Err(PipelineError::NoTables) => {
                println!("no table");
                any_empty = true;
            }
            Err(error) => {
                eprintln!("tablegrid: {}: {error}", input.display());
                any_error = true;
            }
        }
    }

    if any_error {
        ExitCode::from(1)
    } else if any_empty {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
