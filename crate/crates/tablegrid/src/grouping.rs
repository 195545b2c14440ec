//! Partitioning of cell boxes into per-table groups.
//!
//! The loop repeatedly takes the tallest remaining outline and claims every
//! cell box inside it, so one pass per table separates multiple tables on a
//! page. Inputs are sorted up front, which makes the grouping independent of
//! the caller's box order.

use crate::contours::CellBox;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    /// No group could be formed; the page has no table.
    #[error("no table")]
    NoTablesFound,
}

/// One detected table: its outer outline and the cell boxes inside it.
#[derive(Debug, Clone)]
pub struct TableGroup {
    /// 1-based ordinal by outline position (top-to-bottom, left-to-right).
    pub id: usize,
    pub outline: CellBox,
    pub cells: Vec<CellBox>,
}

/// Grouping result plus bookkeeping for diagnostics.
#[derive(Debug, Clone, Default)]
pub struct Grouping {
    pub groups: Vec<TableGroup>,
    /// Cell boxes contained in no outline.
    pub orphan_cells: usize,
    /// Outlines nested inside another outline; their cells were absorbed by
    /// the enclosing table.
    pub absorbed_outlines: usize,
    /// Outlines with no cells inside (solid blobs), dropped.
    pub empty_outlines: usize,
}

impl Grouping {
    pub fn empty() -> Self {
        Self::default()
    }
}

/// True when `inner`'s corners lie within `outer` expanded by `slack` on
/// every side. The slack absorbs line thickness on shared borders.
pub fn containment(inner: &CellBox, outer: &CellBox, slack: u32) -> bool {
    let s = i64::from(slack);
    i64::from(inner.x_min) >= i64::from(outer.x_min) - s
        && i64::from(inner.y_min) >= i64::from(outer.y_min) - s
        && i64::from(inner.x_max) <= i64::from(outer.x_max) + s
        && i64::from(inner.y_max) <= i64::from(outer.y_max) + s
}

fn scan_key(b: &CellBox) -> (u32, u32, u32, u32) {
    (b.y_min, b.x_min, b.y_max, b.x_max)
}

/// Ordering for outline selection: taller first, then larger, then closer to
/// the top-left corner.
fn outline_priority(a: &CellBox, b: &CellBox) -> std::cmp::Ordering {
    a.height()
        .cmp(&b.height())
        .then(a.area().cmp(&b.area()))
        .then(b.y_min.cmp(&a.y_min))
        .then(b.x_min.cmp(&a.x_min))
}

/// Groups cell boxes under table outlines.
///
/// Each round selects the outline of maximum height (ties: larger area, then
/// closer to the top), claims the contained cell boxes and any nested
/// outlines, and removes them all. Groups come back sorted by outline
/// position with 1-based ids.
pub fn group_tables(
    outlines: Vec<CellBox>,
    cells: Vec<CellBox>,
    slack: u32,
) -> Result<Grouping, GroupError> {
    let mut outlines = outlines;
    let mut cells = cells;
    outlines.sort_by_key(scan_key);
    cells.sort_by_key(scan_key);

    let mut groups = Vec::new();
    let mut absorbed = 0usize;
    let mut empty = 0usize;
    while !outlines.is_empty() {
        let best = outlines
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| outline_priority(a, b))
            .map(|(i, _)| i)
            .expect("nonempty");
        let outline = outlines.remove(best);

        let mut inside = Vec::new();
        cells.retain(|c| {
            if containment(c, &outline, slack) {
                inside.push(*c);
                false
            } else {
                true
            }
        });
        let before = outlines.len();
        outlines.retain(|o| !containment(o, &outline, slack));
        absorbed += before - outlines.len();

        if inside.is_empty() {
            empty += 1;
            continue;
        }
        groups.push(TableGroup {
            id: 0,
            outline,
            cells: inside,
        });
    }

    if groups.is_empty() {
        return Err(GroupError::NoTablesFound);
    }

    groups.sort_by_key(|g| scan_key(&g.outline));
    for (i, g) in groups.iter_mut().enumerate() {
        g.id = i + 1;
    }
    Ok(Grouping {
        groups,
        orphan_cells: cells.len(),
        absorbed_outlines: absorbed,
        empty_outlines: empty,
    })
}
