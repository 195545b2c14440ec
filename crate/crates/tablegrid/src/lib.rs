//! Detection and extraction of bordered tables from scanned document images.
//!
//! The pipeline rebuilds each table's line skeleton from a binarized page,
//! traces the skeleton's borders to find cells, groups cells into tables,
//! and drops externally produced OCR words into the resulting row/column
//! grids:
//!
//! 1. [`raster`] loads PGM/PPM input and converts color to gray.
//! 2. [`binarize`] turns the page into ink-as-foreground bits, either with a
//!    global Otsu threshold or with the default Gaussian-weighted adaptive
//!    threshold that survives non-uniform contrast.
//! 3. [`morphology`] opens the binary page with directional line kernels and
//!    ORs the two masks into the table skeleton.
//! 4. [`contours`] follows every border of the skeleton; hole borders are
//!    cell candidates, outer borders are table outlines.
//! 5. [`grouping`] partitions cells under outlines, one group per table.
//! 6. [`ocr`] parses the OCR engine's word-data TSV and filters by
//!    confidence; [`gridmap`] clusters cells into rows and assigns each word
//!    to the cell containing its center.
//! 7. [`emit`] serializes every table as RFC 4180 CSV and all tables as one
//!    JSON document.
//!
//! [`synth`] renders grid-table fixtures with exact ground truth (including
//! synthetic OCR output), and [`pipeline`] wires the stages together behind
//! [`RunConfig`]. The `tablegrid` binary is a thin wrapper over
//! [`pipeline::run`]; the `examples/` directory shows each stage in
//! isolation.
//!
//! All types are immutable values after construction and every operation up
//! to file emission is a pure function, so the library is safe to use from
//! multiple threads.

pub mod binarize;
pub mod contours;
pub mod emit;
pub mod gridmap;
pub mod grouping;
pub mod morphology;
pub mod ocr;
pub mod pipeline;
pub mod raster;
pub mod synth;

pub use binarize::{AdaptiveParams, BinarizeError, OtsuResult, Polarity};
pub use contours::{CellBox, Contour, ContourKind, Point};
pub use emit::{EmitConfig, EmitError, OutputFormat, TableRecord};
pub use gridmap::{RowClustering, TableGrid};
pub use grouping::{GroupError, Grouping, TableGroup};
pub use morphology::{KernelKind, Skeleton, SkeletonConfig, StructuringElement};
pub use ocr::{OcrError, OcrWord};
pub use pipeline::{BinarizeMode, OcrSource, PipelineError, RunConfig, RunSummary};
pub use raster::{BinaryImage, GrayImage, Histogram, RasterError};
