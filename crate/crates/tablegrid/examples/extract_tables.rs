//! Full pipeline on the bundled two-table fixture: render the page, run
//! detection + word mapping, and print the extracted tables as CSV.
//!
//! Run with: cargo run -p tablegrid --example extract_tables

use std::error::Error;

use tablegrid::emit::to_csv;
use tablegrid::pipeline::{run, OcrSource, RunConfig};
use tablegrid::raster::write_pgm_path;
use tablegrid::synth::{emit_ocr_tsv, FixtureSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let json = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/two_tables.json"
    ))?;
    let fixture = FixtureSpec::from_json(&json)?;
    let (image, truth) = fixture.render()?;

    let dir = std::env::temp_dir().join("tablegrid-extract-example");
    std::fs::create_dir_all(&dir)?;
    let image_path = dir.join("page.pgm");
    write_pgm_path(&image, &image_path)?;
    let tsv_path = dir.join("page.tsv");
    std::fs::write(&tsv_path, emit_ocr_tsv(&truth))?;

    let mut cfg = RunConfig::new(&image_path);
    cfg.ocr_source = OcrSource::TsvPath(tsv_path);
    cfg.output_dir = dir.clone();
    let summary = run(&cfg)?;

    println!(
        "detected {} table(s) on {}",
        summary.records.len(),
        image_path.display()
    );
    for record in &summary.records {
        println!(
            "\ntable {} ({} rows x {} cols, outline x {}..{} y {}..{}):",
            record.grid.table_id,
            record.grid.n_rows,
            record.grid.n_cols,
            record.outline.x_min,
            record.outline.x_max,
            record.outline.y_min,
            record.outline.y_max,
        );
        print!("{}", String::from_utf8(to_csv(&record.grid))?);
    }
    println!("\nfiles written:");
    for path in &summary.written {
        println!("  {}", path.display());
    }
    Ok(())
}
