//! Deterministic test-fixture generator.
//!
//! Renders pages of bordered grid tables together with exact ground truth:
//! the drawn line mask, per-table outline and cell-interior boxes, and
//! per-word boxes laid out with fixed-advance text metrics. The word boxes
//! can be emitted as OCR word-data TSV, so the whole pipeline is exercised
//! end to end without a real OCR engine.
//!
//! Text metrics are fixed constants: 8 px per character, 14 px line height,
//! words laid out left-aligned with 4 px padding inside the cell interior
//! and an 8 px advance between words. Cell text may contain `\n` to force
//! multiple text lines (18 px apart).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contours::{CellBox, ContourKind};
use crate::raster::{BinaryImage, GrayImage};

pub const CHAR_WIDTH: u32 = 8;
pub const CHAR_HEIGHT: u32 = 14;
pub const CELL_PADDING: u32 = 4;
pub const WORD_GAP: u32 = 8;
pub const LINE_ADVANCE: u32 = 18;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("table {0} does not fit within the page")]
    SpecOverflow(usize),
    #[error("tables {0} and {1} overlap")]
    TablesOverlap(usize, usize),
    #[error("table {0}: cell_texts shape does not match row/column counts")]
    ShapeMismatch(usize),
    #[error("table {0}: line width leaves no cell interior")]
    DegenerateCells(usize),
    #[error("table {table}: text overflows cell ({row}, {col})")]
    TextOverflow {
        table: usize,
        row: usize,
        col: usize,
    },
    #[error("fixture JSON: {0}")]
    BadFixture(String),
}

/// Geometry and content of one rendered table.
///
/// Each cell is drawn as its own hollow rectangle of the declared width and
/// height, so a cell's interior is the declared size minus `2 * line_width`
/// per axis and shared boundaries are twice the line width thick.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableSpec {
    /// Top-left corner on the page.
    pub origin: (u32, u32),
    pub col_widths: Vec<u32>,
    pub row_heights: Vec<u32>,
    #[serde(default = "default_line_width")]
    pub line_width: u32,
    /// Row-major cell contents; `rows x cols` must match the size vectors.
    pub cell_texts: Vec<Vec<String>>,
    /// Drives the stroke-glyph variation when text strokes are rendered.
    #[serde(default)]
    pub seed: u64,
}

fn default_line_width() -> u32 {
    2
}

impl TableSpec {
    pub fn total_width(&self) -> u32 {
        self.col_widths.iter().sum()
    }

    pub fn total_height(&self) -> u32 {
        self.row_heights.iter().sum()
    }
}

/// Page canvas parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PageSpec {
    pub width: u32,
    pub height: u32,
    /// Line (and stroke) intensity.
    pub ink: u8,
    /// Background intensity.
    pub paper_bg: u8,
}

/// Linear vertical shading: row `y` is darkened by `max_darken * y / (h-1)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GradientOverlay {
    pub max_darken: u8,
}

/// Rendering switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct RenderOptions {
    /// Draw glyph-like filler strokes inside every word box. Stroke runs
    /// stay at most 8 px long in both directions so line extraction must
    /// remove them.
    pub text_strokes: bool,
    pub gradient: Option<GradientOverlay>,
}

/// One ground-truth word with the cell it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthWord {
    pub text: String,
    pub left: u32,
    pub top: u32,
    pub width: u32,
    pub height: u32,
    pub table: usize,
    pub row: usize,
    pub col: usize,
    pub line: usize,
    pub word: usize,
}

/// Ground truth for one rendered table.
#[derive(Debug, Clone)]
pub struct TableTruth {
    pub outline: CellBox,
    /// Row-major interior boxes.
    pub cells: Vec<Vec<CellBox>>,
    pub words: Vec<TruthWord>,
    pub cell_texts: Vec<Vec<String>>,
}

impl TableTruth {
    /// Cell texts as the grid mapper should reproduce them: text lines and
    /// repeated whitespace collapse to single spaces.
    pub fn expected_texts(&self) -> Vec<Vec<String>> {
        self.cell_texts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t.split_whitespace().collect::<Vec<_>>().join(" "))
                    .collect()
            })
            .collect()
    }
}

/// Everything a test can check against.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub tables: Vec<TableTruth>,
    /// Exactly the grid-line pixels (strokes and shading excluded).
    pub line_mask: BinaryImage,
}

fn fill_rect(img: &mut GrayImage, x0: u32, y0: u32, x1: u32, y1: u32, value: u8) {
    for y in y0..y1 {
        for x in x0..x1 {
            img.set(x, y, value);
        }
    }
}

fn mask_rect(mask: &mut BinaryImage, x0: u32, y0: u32, x1: u32, y1: u32) {
    for y in y0..y1 {
        for x in x0..x1 {
            mask.set(x, y, true);
        }
    }
}

fn mix(seed: u64, a: u64, b: u64, c: u64) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for v in [a, b, c] {
        h ^= v.wrapping_mul(0xFF51_AFD7_ED55_8CCD);
        h = h.rotate_left(23).wrapping_mul(0xC4CE_B9FE_1A85_EC53);
    }
    h
}

/// Draws glyph-like marks for one word; every stroke run is at most 8 px.
fn draw_word_strokes(img: &mut GrayImage, w: &TruthWord, seed: u64, ink: u8) {
    for (k, _) in w.text.chars().enumerate() {
        let cx = w.left + k as u32 * CHAR_WIDTH;
        let variant = mix(
            seed,
            w.table as u64 * 1000 + w.word as u64,
            w.left as u64,
            k as u64,
        ) % 3;
        if variant != 1 {
            // vertical bar, 2x8
            fill_rect(img, cx + 2, w.top + 3, cx + 4, w.top + 11, ink);
        }
        if variant != 0 {
            // horizontal bar, 6x2
            fill_rect(img, cx + 1, w.top + 6, cx + 7, w.top + 8, ink);
        }
    }
}

/// Renders the tables onto a page and returns the image and ground truth.
///
/// Tables must fit the page and be pairwise disjoint.
pub fn render(
    specs: &[TableSpec],
    page: &PageSpec,
    opts: &RenderOptions,
) -> Result<(GrayImage, GroundTruth), SynthError> {
    // Validate geometry first.
    for (i, spec) in specs.iter().enumerate() {
        if spec.row_heights.is_empty() || spec.col_widths.is_empty() {
            return Err(SynthError::ShapeMismatch(i));
        }
        if spec.cell_texts.len() != spec.row_heights.len()
            || spec
                .cell_texts
                .iter()
                .any(|r| r.len() != spec.col_widths.len())
        {
            return Err(SynthError::ShapeMismatch(i));
        }
        let min_cell = spec
            .col_widths
            .iter()
            .chain(&spec.row_heights)
            .min()
            .copied()
            .unwrap();
        if spec.line_width == 0 || min_cell <= 2 * spec.line_width {
            return Err(SynthError::DegenerateCells(i));
        }
        let (ox, oy) = spec.origin;
        if u64::from(ox) + u64::from(spec.total_width()) > u64::from(page.width)
            || u64::from(oy) + u64::from(spec.total_height()) > u64::from(page.height)
        {
            return Err(SynthError::SpecOverflow(i));
        }
    }
    for i in 0..specs.len() {
        for j in (i + 1)..specs.len() {
            let (a, b) = (&specs[i], &specs[j]);
            let disjoint = a.origin.0 + a.total_width() <= b.origin.0
                || b.origin.0 + b.total_width() <= a.origin.0
                || a.origin.1 + a.total_height() <= b.origin.1
                || b.origin.1 + b.total_height() <= a.origin.1;
            if !disjoint {
                return Err(SynthError::TablesOverlap(i, j));
            }
        }
    }

    let mut img = GrayImage::filled(page.width, page.height, page.paper_bg);
    let mut line_mask = BinaryImage::new(page.width, page.height);
    let mut tables = Vec::with_capacity(specs.len());

    for (t, spec) in specs.iter().enumerate() {
        let lw = spec.line_width;
        let (ox, oy) = spec.origin;
        let mut cells = Vec::with_capacity(spec.row_heights.len());
        let mut words = Vec::new();

        let mut y = oy;
        for (r, &rh) in spec.row_heights.iter().enumerate() {
            let mut row_cells = Vec::with_capacity(spec.col_widths.len());
            let mut x = ox;
            for (c, &cw) in spec.col_widths.iter().enumerate() {
                // Hollow rectangle for this cell.
                fill_rect(&mut img, x, y, x + cw, y + lw, page.ink);
                fill_rect(&mut img, x, y + rh - lw, x + cw, y + rh, page.ink);
                fill_rect(&mut img, x, y, x + lw, y + rh, page.ink);
                fill_rect(&mut img, x + cw - lw, y, x + cw, y + rh, page.ink);
                mask_rect(&mut line_mask, x, y, x + cw, y + lw);
                mask_rect(&mut line_mask, x, y + rh - lw, x + cw, y + rh);
                mask_rect(&mut line_mask, x, y, x + lw, y + rh);
                mask_rect(&mut line_mask, x + cw - lw, y, x + cw, y + rh);

                let interior = CellBox::new(
                    x + lw,
                    y + lw,
                    x + cw - lw - 1,
                    y + rh - lw - 1,
                    ContourKind::Hole,
                );
                row_cells.push(interior);

                // Lay out the cell text with the fixed metrics.
                for (line_idx, line) in spec.cell_texts[r][c].split('\n').enumerate() {
                    let top = interior.y_min + CELL_PADDING + line_idx as u32 * LINE_ADVANCE;
                    let mut cursor = interior.x_min + CELL_PADDING;
                    for (word_idx, token) in line.split_whitespace().enumerate() {
                        let width = CHAR_WIDTH * token.chars().count() as u32;
                        if cursor + width > interior.x_max + 1
                            || top + CHAR_HEIGHT > interior.y_max + 1
                        {
                            return Err(SynthError::TextOverflow {
                                table: t,
                                row: r,
                                col: c,
                            });
                        }
                        words.push(TruthWord {
                            text: token.to_string(),
                            left: cursor,
                            top,
                            width,
                            height: CHAR_HEIGHT,
                            table: t,
                            row: r,
                            col: c,
                            line: line_idx,
                            word: word_idx,
                        });
                        cursor += width + WORD_GAP;
                    }
                }
                x += cw;
            }
            cells.push(row_cells);
            y += rh;
        }

        if opts.text_strokes {
            for w in &words {
                draw_word_strokes(&mut img, w, spec.seed, page.ink);
            }
        }

        tables.push(TableTruth {
            outline: CellBox::new(
                ox,
                oy,
                ox + spec.total_width() - 1,
                oy + spec.total_height() - 1,
                ContourKind::Outer,
            ),
            cells,
            words,
            cell_texts: spec.cell_texts.clone(),
        });
    }

    if let Some(gradient) = opts.gradient {
        let h = page.height;
        for y in 0..h {
            let darken = (f64::from(gradient.max_darken) * f64::from(y) / f64::from(h.max(2) - 1))
                .round() as u8;
            for x in 0..page.width {
                let v = img.get(x, y).saturating_sub(darken);
                img.set(x, y, v);
            }
        }
    }

    Ok((img, GroundTruth { tables, line_mask }))
}

/// Emits the ground-truth words as OCR word-data TSV (level-5 rows, conf 95).
pub fn emit_ocr_tsv(gt: &GroundTruth) -> String {
    let mut out = String::from(crate::ocr::TSV_HEADER);
    out.push('\n');
    for (t, table) in gt.tables.iter().enumerate() {
        for w in &table.words {
            out.push_str(&format!(
                "5\t1\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t95\t{}\n",
                t + 1,
                w.row + 1,
                w.line + 1,
                w.word + 1,
                w.left,
                w.top,
                w.width,
                w.height,
                w.text
            ));
        }
    }
    out
}

/// A page fixture stored as JSON: canvas, render switches, and table specs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub page_width: u32,
    pub page_height: u32,
    #[serde(default)]
    pub ink: u8,
    #[serde(default = "default_paper_bg")]
    pub paper_bg: u8,
    #[serde(default)]
    pub text_strokes: bool,
    #[serde(default)]
    pub gradient: Option<GradientOverlay>,
    pub tables: Vec<TableSpec>,
}

fn default_paper_bg() -> u8 {
    255
}

impl FixtureSpec {
    pub fn from_json(json: &str) -> Result<Self, SynthError> {
        serde_json::from_str(json).map_err(|e| SynthError::BadFixture(e.to_string()))
    }

    pub fn page(&self) -> PageSpec {
        PageSpec {
            width: self.page_width,
            height: self.page_height,
            ink: self.ink,
            paper_bg: self.paper_bg,
        }
    }

    pub fn options(&self) -> RenderOptions {
        RenderOptions {
            text_strokes: self.text_strokes,
            gradient: self.gradient,
        }
    }

    pub fn render(&self) -> Result<(GrayImage, GroundTruth), SynthError> {
        render(&self.tables, &self.page(), &self.options())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ocr::parse_ocr_tsv;

    fn simple_spec(origin: (u32, u32), texts: &[&[&str]], cw: u32, rh: u32) -> TableSpec {
        TableSpec {
            origin,
            col_widths: vec![cw; texts[0].len()],
            row_heights: vec![rh; texts.len()],
            line_width: 2,
            cell_texts: texts
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
            seed: 0,
        }
    }

    fn page() -> PageSpec {
        PageSpec {
            width: 400,
            height: 300,
            ink: 0,
            paper_bg: 255,
        }
    }

    #[test]
    fn single_cell_interior_geometry() {
        let spec = TableSpec {
            origin: (10, 10),
            col_widths: vec![100],
            row_heights: vec![100],
            line_width: 2,
            cell_texts: vec![vec![String::new()]],
            seed: 0,
        };
        let (_, gt) = render(&[spec], &page(), &RenderOptions::default()).unwrap();
        assert_eq!(gt.tables.len(), 1);
        let t = &gt.tables[0];
        assert_eq!(
            (
                t.outline.x_min,
                t.outline.y_min,
                t.outline.x_max,
                t.outline.y_max
            ),
            (10, 10, 109, 109)
        );
        let cell = t.cells[0][0];
        assert_eq!(cell.width(), 96);
        assert_eq!(cell.height(), 96);
    }

    #[test]
    fn two_table_page_has_expected_cells() {
        let row1: &[&str] = &["a", "b", "c", "d", "e"];
        let row2: &[&str] = &["x", "y", "z"];
        let t1 = simple_spec((20, 20), &[row1; 4], 60, 40);
        let t2 = simple_spec((20, 200), &[row2; 4], 60, 24);
        let (_, gt) = render(&[t1, t2], &page(), &RenderOptions::default()).unwrap();
        assert_eq!(gt.tables[0].cells.iter().map(Vec::len).sum::<usize>(), 20);
        assert_eq!(gt.tables[1].cells.iter().map(Vec::len).sum::<usize>(), 12);
    }

    #[test]
    fn line_mask_matches_ink_exactly_without_strokes() {
        let spec = simple_spec((30, 30), &[&["q", "w"], &["e", "r"]], 80, 60);
        let (img, gt) = render(&[spec], &page(), &RenderOptions::default()).unwrap();
        for y in 0..img.height() {
            for x in 0..img.width() {
                assert_eq!(img.get(x, y) == 0, gt.line_mask.get(x, y), "at ({x},{y})");
            }
        }
    }

    #[test]
    fn gradient_changes_intensities_not_geometry() {
        let spec = simple_spec((30, 30), &[&["q", "w"]], 80, 60);
        let (plain, gt_plain) = render(
            std::slice::from_ref(&spec),
            &page(),
            &RenderOptions::default(),
        )
        .unwrap();
        let opts = RenderOptions {
            text_strokes: false,
            gradient: Some(GradientOverlay { max_darken: 100 }),
        };
        let (shaded, gt_shaded) = render(&[spec], &page(), &opts).unwrap();
        assert_eq!(gt_plain.line_mask, gt_shaded.line_mask);
        assert_eq!(gt_plain.tables[0].outline, gt_shaded.tables[0].outline);
        assert!(plain != shaded);
        // Bottom rows are darker than top rows.
        assert!(shaded.get(5, 295) < shaded.get(5, 5));
    }

    #[test]
    fn overflow_and_overlap_are_rejected() {
        let big = simple_spec((350, 10), &[&["a"]], 100, 50);
        match render(&[big], &page(), &RenderOptions::default()) {
            Err(SynthError::SpecOverflow(0)) => {}
            other => panic!("expected overflow error, got {other:?}"),
        }
        let a = simple_spec((10, 10), &[&["a"]], 100, 100);
        let b = simple_spec((50, 50), &[&["b"]], 100, 100);
        match render(&[a, b], &page(), &RenderOptions::default()) {
            Err(SynthError::TablesOverlap(0, 1)) => {}
            other => panic!("expected overlap error, got {other:?}"),
        }
    }

    #[test]
    fn text_overflow_is_rejected() {
        let spec = simple_spec((10, 10), &[&["waytoolongforthiscell"]], 40, 40);
        match render(&[spec], &page(), &RenderOptions::default()) {
            Err(SynthError::TextOverflow {
                table: 0,
                row: 0,
                col: 0,
            }) => {}
            other => panic!("expected text overflow, got {other:?}"),
        }
    }

    #[test]
    fn tsv_round_trip_preserves_geometry() {
        let t1 = simple_spec(
            (20, 20),
            &[&["Soft Computing", "alpha"], &["", "beta"]],
            160,
            40,
        );
        let (_, gt) = render(&[t1], &page(), &RenderOptions::default()).unwrap();
        let tsv = emit_ocr_tsv(&gt);
        let words = parse_ocr_tsv(&tsv).unwrap();
        let truth: Vec<&TruthWord> = gt.tables.iter().flat_map(|t| &t.words).collect();
        assert_eq!(words.len(), truth.len());
        for (parsed, truth) in words.iter().zip(truth) {
            assert_eq!(parsed.text, truth.text);
            assert_eq!(
                (parsed.left, parsed.top, parsed.width, parsed.height),
                (truth.left, truth.top, truth.width, truth.height)
            );
            assert_eq!(parsed.conf, 95.0);
        }
        // Two words of one cell share the same y band.
        assert_eq!(words[0].top, words[1].top);
        // Empty cells emit no rows.
        assert_eq!(words.len(), 4);
    }

    #[test]
    fn strokes_stay_inside_word_boxes() {
        let spec = simple_spec((20, 20), &[&["Word Pair"]], 200, 40);
        let opts = RenderOptions {
            text_strokes: true,
            gradient: None,
        };
        let (img, gt) = render(&[spec], &page(), &opts).unwrap();
        for y in 0..img.height() {
            for x in 0..img.width() {
                if img.get(x, y) != 0 || gt.line_mask.get(x, y) {
                    continue;
                }
                // Ink outside the line mask must come from a word stroke.
                let inside_word = gt.tables[0].words.iter().any(|w| {
                    x >= w.left && x < w.left + w.width && y >= w.top && y < w.top + w.height
                });
                assert!(inside_word, "stray ink at ({x},{y})");
            }
        }
    }

    #[test]
    fn fixture_json_round_trip() {
        let fixture = FixtureSpec {
            page_width: 400,
            page_height: 300,
            ink: 0,
            paper_bg: 255,
            text_strokes: true,
            gradient: None,
            tables: vec![simple_spec((20, 20), &[&["a", "b"]], 60, 40)],
        };
        let json = serde_json::to_string(&fixture).unwrap();
        let back = FixtureSpec::from_json(&json).unwrap();
        assert_eq!(back.tables[0].cell_texts, fixture.tables[0].cell_texts);
        back.render().unwrap();
    }
}
