//! Border following and table grouping: trace the skeleton's contours,
//! reduce them to boxes, and partition the cells under their table
//! outlines.
//!
//! Run with: cargo run -p tablegrid --example trace_cells

use std::error::Error;

use tablegrid::binarize::{adaptive_gaussian, AdaptiveParams, Polarity};
use tablegrid::contours::{find_contours, to_cell_boxes, ContourKind};
use tablegrid::grouping::group_tables;
use tablegrid::morphology::{extract_skeleton, SkeletonConfig};
use tablegrid::synth::FixtureSpec;

fn main() -> Result<(), Box<dyn Error>> {
    let json = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/two_tables.json"
    ))?;
    let (image, _) = FixtureSpec::from_json(&json)?.render()?;
    let binary = adaptive_gaussian(
        &image,
        &AdaptiveParams::default(),
        Polarity::DarkAsForeground,
    )?;
    let skeleton = extract_skeleton(&binary, &SkeletonConfig::default());

    let contours = find_contours(&skeleton.combined);
    let outer = contours
        .iter()
        .filter(|c| c.kind == ContourKind::Outer)
        .count();
    let holes = contours.len() - outer;
    println!(
        "{} contours traced: {outer} outer border(s), {holes} hole border(s)",
        contours.len()
    );

    let boxes = to_cell_boxes(&contours, 64);
    let (outlines, cells): (Vec<_>, Vec<_>) = boxes
        .into_iter()
        .partition(|b| b.kind == ContourKind::Outer);
    println!(
        "{} outline box(es), {} cell box(es) after the area filter",
        outlines.len(),
        cells.len()
    );

    let grouping = group_tables(outlines, cells, 2)?;
    for group in &grouping.groups {
        println!(
            "table {}: {} cells, outline x {}..{} y {}..{}",
            group.id,
            group.cells.len(),
            group.outline.x_min,
            group.outline.x_max,
            group.outline.y_min,
            group.outline.y_max,
        );
        let first = &group.cells[0];
        println!(
            "  first cell box x {}..{} y {}..{} (center {:.1}, {:.1})",
            first.x_min,
            first.x_max,
            first.y_min,
            first.y_max,
            first.x_mean(),
            first.y_mean(),
        );
    }
    if grouping.orphan_cells > 0 {
        println!(
            "{} orphan cell(s) outside every outline",
            grouping.orphan_cells
        );
    }
    Ok(())
}
