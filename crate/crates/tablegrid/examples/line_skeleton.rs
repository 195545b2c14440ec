//! Directional line extraction: open the binarized page with a vertical and
//! a horizontal kernel and combine the masks into the table skeleton. The
//! dumps mirror the pipeline's debug stages 03-05.
//!
//! Run with: cargo run -p tablegrid --example line_skeleton

use std::error::Error;

use tablegrid::binarize::{adaptive_gaussian, AdaptiveParams, Polarity};
use tablegrid::morphology::{extract_skeleton, SkeletonConfig};
use tablegrid::raster::write_pgm_path;
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

    let cfg = SkeletonConfig::default();
    let kernel_length = (image.height() / cfg.divisor).max(1);
    let skeleton = extract_skeleton(&binary, &cfg);

    let dir = std::env::temp_dir().join("tablegrid-skeleton-example");
    std::fs::create_dir_all(&dir)?;
    write_pgm_path(&skeleton.vertical.to_gray(255, 0), dir.join("vertical.pgm"))?;
    write_pgm_path(
        &skeleton.horizontal.to_gray(255, 0),
        dir.join("horizontal.pgm"),
    )?;
    write_pgm_path(&skeleton.combined.to_gray(255, 0), dir.join("skeleton.pgm"))?;

    println!(
        "kernel length {kernel_length} ({} / {}), {} opening iteration(s)",
        image.height(),
        cfg.divisor,
        cfg.open_iterations
    );
    println!(
        "binarized ink {} px -> vertical {} px, horizontal {} px, skeleton {} px",
        binary.count_foreground(),
        skeleton.vertical.count_foreground(),
        skeleton.horizontal.count_foreground(),
        skeleton.combined.count_foreground(),
    );
    println!("masks written to {}", dir.display());
    Ok(())
}
