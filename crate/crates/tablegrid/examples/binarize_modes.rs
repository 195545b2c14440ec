//! Global Otsu vs adaptive Gaussian thresholding on a page with a strong
//! vertical contrast gradient. The written PGMs show the global threshold
//! flooding the dark half of the page while the adaptive one keeps only the
//! ink.
//!
//! Run with: cargo run -p tablegrid --example binarize_modes

use std::error::Error;

use tablegrid::binarize::{
    adaptive_gaussian, apply_threshold, otsu_threshold, AdaptiveParams, Polarity,
};
use tablegrid::raster::{histogram, write_pgm_path};
use tablegrid::synth::{FixtureSpec, GradientOverlay};

fn main() -> Result<(), Box<dyn Error>> {
    let json = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/two_tables.json"
    ))?;
    let mut fixture = FixtureSpec::from_json(&json)?;
    fixture.gradient = Some(GradientOverlay { max_darken: 200 });
    let (image, _) = fixture.render()?;

    let dir = std::env::temp_dir().join("tablegrid-binarize-example");
    std::fs::create_dir_all(&dir)?;
    write_pgm_path(&image, dir.join("shaded_page.pgm"))?;

    let otsu = otsu_threshold(&histogram(&image))?;
    println!(
        "otsu threshold {} (between-class variance {:.1}, within-class {:.1})",
        otsu.threshold, otsu.between_class_variance, otsu.within_class_variance
    );
    let global = apply_threshold(&image, otsu.threshold, Polarity::DarkAsForeground);
    write_pgm_path(&global.to_gray(255, 0), dir.join("binary_otsu.pgm"))?;
    println!(
        "global threshold marks {} of {} pixels as ink",
        global.count_foreground(),
        image.pixels().len()
    );

    let params = AdaptiveParams::default();
    let adaptive = adaptive_gaussian(&image, &params, Polarity::DarkAsForeground)?;
    write_pgm_path(&adaptive.to_gray(255, 0), dir.join("binary_adaptive.pgm"))?;
    println!(
        "adaptive (block {}, C {}) marks {} pixels as ink",
        params.block_size,
        params.offset_c,
        adaptive.count_foreground()
    );

    println!("\nimages written to {}", dir.display());
    Ok(())
}
