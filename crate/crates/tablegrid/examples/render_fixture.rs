//! Regenerates a fixture's artifacts from its JSON spec: the rendered page
//! as PGM, the synthetic OCR TSV, and the expected cell texts.
//!
//! Run with: cargo run -p tablegrid --example render_fixture [fixture.json] [out_dir]
//! Defaults to the bundled two-table fixture and a temp directory.

use std::error::Error;
use std::path::PathBuf;

use tablegrid::raster::write_pgm_path;
use tablegrid::synth::{emit_ocr_tsv, FixtureSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let spec_path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two_tables.json").into());
    let out_dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("tablegrid-fixture"));

    let fixture = FixtureSpec::from_json(&std::fs::read_to_string(&spec_path)?)?;
    let (image, truth) = fixture.render()?;
    std::fs::create_dir_all(&out_dir)?;

    let stem = PathBuf::from(&spec_path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "fixture".into());
    let pgm = out_dir.join(format!("{stem}.pgm"));
    write_pgm_path(&image, &pgm)?;
    let tsv = out_dir.join(format!("{stem}.tsv"));
    std::fs::write(&tsv, emit_ocr_tsv(&truth))?;

    println!(
        "rendered {} ({}x{})",
        pgm.display(),
        image.width(),
        image.height()
    );
    println!("wrote {}", tsv.display());
    for (i, table) in truth.tables.iter().enumerate() {
        println!(
            "table {}: {} rows x {} cols, {} words",
            i + 1,
            table.cells.len(),
            table.cells[0].len(),
            table.words.len()
        );
        for row in table.expected_texts() {
            println!("  {}", row.join(" | "));
        }
    }
    Ok(())
}
