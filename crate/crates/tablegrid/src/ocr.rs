//! Ingestion of OCR word data.
//!
//! The OCR engine runs out of process; this module only consumes its
//! tab-separated data output (12 columns, header row, one row per layout
//! element). Word-level rows become [`OcrWord`]s with the box center
//! precomputed, everything else is skipped.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OcrError {
    #[error("malformed TSV row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("missing TSV header row")]
    MissingHeader,
}

/// Rows at this level carry recognized words.
const WORD_LEVEL: u32 = 5;
const COLUMNS: usize = 12;

/// One recognized word with its box, confidence and derived center.
#[derive(Debug, Clone, PartialEq)]
pub struct OcrWord {
    // Layout position emitted by the engine, kept so rows round-trip.
    pub page_num: u32,
    pub block_num: u32,
    pub par_num: u32,
    pub line_num: u32,
    pub word_num: u32,
    pub left: u32,
    pub top: u32,
    pub width: u32,
    pub height: u32,
    /// Recognition confidence in `[0, 100]`.
    pub conf: f64,
    pub text: String,
}

impl OcrWord {
    /// Horizontal box center.
    pub fn x_mean(&self) -> f64 {
        f64::from(self.left) + f64::from(self.width) / 2.0
    }

    /// Vertical box center.
    pub fn y_mean(&self) -> f64 {
        f64::from(self.top) + f64::from(self.height) / 2.0
    }
}

fn parse_field<T: std::str::FromStr>(
    fields: &[&str],
    idx: usize,
    name: &str,
    line: usize,
) -> Result<T, OcrError> {
    fields[idx].parse().map_err(|_| OcrError::MalformedRow {
        line,
        reason: format!("{name} is not numeric: {:?}", fields[idx]),
    })
}

/// Parses the 12-column word data TSV.
///
/// Expects the standard header row. Word-level rows (level 5) with
/// non-negative confidence become [`OcrWord`]s; all other levels describe
/// layout and are skipped. Wrong column counts and non-numeric geometry are
/// reported with their 1-based line number.
pub fn parse_ocr_tsv(content: &str) -> Result<Vec<OcrWord>, OcrError> {
    let mut lines = content.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(OcrError::MissingHeader);
    };
    if !header.starts_with("level\t") {
        return Err(OcrError::MissingHeader);
    }

    let mut words = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != COLUMNS {
            return Err(OcrError::MalformedRow {
                line: line_no,
                reason: format!("expected {COLUMNS} columns, found {}", fields.len()),
            });
        }
        let level: u32 = parse_field(&fields, 0, "level", line_no)?;
        if level != WORD_LEVEL {
            continue;
        }
        let conf: f64 = parse_field(&fields, 10, "conf", line_no)?;
        if conf < 0.0 {
            // conf -1 marks layout rows, never words.
            continue;
        }
        words.push(OcrWord {
            page_num: parse_field(&fields, 1, "page_num", line_no)?,
            block_num: parse_field(&fields, 2, "block_num", line_no)?,
            par_num: parse_field(&fields, 3, "par_num", line_no)?,
            line_num: parse_field(&fields, 4, "line_num", line_no)?,
            word_num: parse_field(&fields, 5, "word_num", line_no)?,
            left: parse_field(&fields, 6, "left", line_no)?,
            top: parse_field(&fields, 7, "top", line_no)?,
            width: parse_field(&fields, 8, "width", line_no)?,
            height: parse_field(&fields, 9, "height", line_no)?,
            conf,
            text: fields[11].to_string(),
        });
    }
    Ok(words)
}

/// The TSV header this crate reads and writes.
pub const TSV_HEADER: &str =
    "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext";

/// Serializes words back to the 12-column TSV (level-5 rows only).
pub fn words_to_tsv(words: &[OcrWord]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for w in words {
        out.push_str(&format!(
            "5\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            w.page_num,
            w.block_num,
            w.par_num,
            w.line_num,
            w.word_num,
            w.left,
            w.top,
            w.width,
            w.height,
            w.conf,
            w.text
        ));
    }
    out
}

/// Keeps words at or above the confidence threshold whose text is not blank,
/// preserving order.
pub fn filter_confidence(words: &[OcrWord], threshold: f64) -> Vec<OcrWord> {
    words
        .iter()
        .filter(|w| w.conf >= threshold && !w.text.trim().is_empty())
        .cloned()
        .collect()
}
