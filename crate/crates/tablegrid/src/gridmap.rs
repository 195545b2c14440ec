//! Row clustering, grid sizing, and word-to-cell assignment.
//!
//! Cells are clustered into rows by their vertical centers, the grid takes
//! its shape from the row count and the widest row, and each filtered OCR
//! word lands in the cell whose box contains its center. Everything sorts
//! internally, so the output is a function of geometry alone.

use crate::contours::CellBox;
use crate::ocr::OcrWord;

/// How consecutive vertical gaps are measured during row clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowClustering {
    /// Compare each cell against the previous cell; near-threshold spacing
    /// chains into one row.
    #[default]
    Chained,
    /// Compare each cell against the first cell of the current row.
    Anchored,
}

/// Splits a table's cells into rows.
///
/// Cells are sorted by `(y_mean, x_mean)` and swept once: a gap of at least
/// `line_threshold` between vertical centers starts a new row. Within a row,
/// cells are ordered by horizontal center.
pub fn cluster_rows(
    cells: &[CellBox],
    line_threshold: f64,
    mode: RowClustering,
) -> Vec<Vec<CellBox>> {
    assert!(!cells.is_empty(), "cluster_rows requires at least one cell");
    assert!(line_threshold > 0.0, "line threshold must be positive");

    let mut sorted = cells.to_vec();
    sorted.sort_by(|a, b| {
        (a.y_mean(), a.x_mean(), a.y_min, a.x_min)
            .partial_cmp(&(b.y_mean(), b.x_mean(), b.y_min, b.x_min))
            .expect("box means are finite")
    });

    let mut rows: Vec<Vec<CellBox>> = Vec::new();
    let mut current = vec![sorted[0]];
    let mut anchor_y = sorted[0].y_mean();
    let mut prev_y = anchor_y;
    for &cell in &sorted[1..] {
        let reference = match mode {
            RowClustering::Chained => prev_y,
            RowClustering::Anchored => anchor_y,
        };
        if cell.y_mean() - reference >= line_threshold {
            rows.push(std::mem::take(&mut current));
            anchor_y = cell.y_mean();
        }
        current.push(cell);
        prev_y = cell.y_mean();
    }
    rows.push(current);

    for row in &mut rows {
        row.sort_by(|a, b| {
            (a.x_mean(), a.y_mean(), a.x_min)
                .partial_cmp(&(b.x_mean(), b.y_mean(), b.x_min))
                .expect("box means are finite")
        });
    }
    rows
}

/// Grid shape: row count and the maximum row length.
pub fn grid_dimensions(rows: &[Vec<CellBox>]) -> (usize, usize) {
    assert!(!rows.is_empty(), "grid needs at least one row");
    (rows.len(), rows.iter().map(Vec::len).max().unwrap_or(0))
}

/// Rectangular text matrix reconstructed for one detected table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableGrid {
    /// 1-based table ordinal, matching the group it came from.
    pub table_id: usize,
    pub n_rows: usize,
    pub n_cols: usize,
    /// `n_rows x n_cols`; ragged rows are right-padded with empty strings.
    pub cells: Vec<Vec<String>>,
    /// Box behind each cell; `None` for padding cells.
    pub cell_boxes: Vec<Vec<Option<CellBox>>>,
}

/// Joins a cell's words in reading order: bucketed into text lines by
/// vertical center, left to right within a line, single spaces between
/// words.
fn join_cell_text(mut words: Vec<&OcrWord>) -> String {
    if words.is_empty() {
        return String::new();
    }
    words.sort_by(|a, b| {
        (a.y_mean(), a.x_mean(), &a.text)
            .partial_cmp(&(b.y_mean(), b.x_mean(), &b.text))
            .expect("word centers are finite")
    });

    let mut heights: Vec<u32> = words.iter().map(|w| w.height).collect();
    heights.sort_unstable();
    let line_gap = (f64::from(heights[heights.len() / 2]) / 2.0).max(1.0);

    let mut lines: Vec<Vec<&OcrWord>> = Vec::new();
    let mut current = vec![words[0]];
    let mut prev_y = words[0].y_mean();
    for &w in &words[1..] {
        if w.y_mean() - prev_y >= line_gap {
            lines.push(std::mem::take(&mut current));
        }
        current.push(w);
        prev_y = w.y_mean();
    }
    lines.push(current);

    let mut parts = Vec::new();
    for line in &mut lines {
        line.sort_by(|a, b| {
            (a.x_mean(), a.y_mean(), &a.text)
                .partial_cmp(&(b.x_mean(), b.y_mean(), &b.text))
                .expect("word centers are finite")
        });
        parts.extend(line.iter().map(|w| w.text.as_str()));
    }
    parts.join(" ")
}

/// Fills the grid by dropping each word into the cell containing its center.
///
/// Expects confidence-filtered words. Words whose center lies in none of the
/// table's cells are ignored for this table.
pub fn assign_words(rows: &[Vec<CellBox>], words: &[OcrWord], table_id: usize) -> TableGrid {
    let (n_rows, n_cols) = grid_dimensions(rows);
    let mut cells = Vec::with_capacity(n_rows);
    let mut cell_boxes = Vec::with_capacity(n_rows);
    for row in rows {
        let mut text_row = Vec::with_capacity(n_cols);
        let mut box_row = Vec::with_capacity(n_cols);
        for cell in row {
            let inside: Vec<&OcrWord> = words
                .iter()
                .filter(|w| cell.contains_center(w.x_mean(), w.y_mean()))
                .collect();
            text_row.push(join_cell_text(inside));
            box_row.push(Some(*cell));
        }
        text_row.resize(n_cols, String::new());
        box_row.resize(n_cols, None);
        cells.push(text_row);
        cell_boxes.push(box_row);
    }
    TableGrid {
        table_id,
        n_rows,
        n_cols,
        cells,
        cell_boxes,
    }
}
