//! OCR word-data handling: parse the engine's 12-column TSV, compute word
//! centers, and filter by confidence.
//!
//! Run with: cargo run -p tablegrid --example ocr_words [words.tsv]

use std::error::Error;

use tablegrid::ocr::{filter_confidence, parse_ocr_tsv};
use tablegrid::synth::{emit_ocr_tsv, FixtureSpec};

fn main() -> Result<(), Box<dyn Error>> {
    // Parse the given TSV, or synthesize one from the bundled fixture.
    let content = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let json = std::fs::read_to_string(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/fixtures/two_tables.json"
            ))?;
            let (_, truth) = FixtureSpec::from_json(&json)?.render()?;
            emit_ocr_tsv(&truth)
        }
    };

    let words = parse_ocr_tsv(&content)?;
    println!("parsed {} word(s)", words.len());
    for w in words.iter().take(8) {
        println!(
            "  {:12} box ({:4},{:4}) {:3}x{:2}  center ({:6.1},{:6.1})  conf {}",
            w.text,
            w.left,
            w.top,
            w.width,
            w.height,
            w.x_mean(),
            w.y_mean(),
            w.conf
        );
    }
    if words.len() > 8 {
        println!("  ... {} more", words.len() - 8);
    }

    let kept = filter_confidence(&words, 30.0);
    println!("{} word(s) survive the confidence threshold 30", kept.len());
    Ok(())
}
