//! Reconstruction and classification of mitral-annulus (MA) geometry from
//! 4D (3D + time) landmark data.
//!
//! The pipeline runs in stages, one module each:
//!
//! 1. [`ingest`] — parse landmark files, convert pixel labels to patient
//!    (world) coordinates using DICOM view geometry.
//! 2. [`geometry`] — per-phase SVD plane fit, direct least-squares ellipse
//!    fit, and co-registration of all phases into a canonical frame.
//! 3. [`features`] — the canonical 187-element morphological/dynamic
//!    feature vector per patient.
//! 4. [`selection`] — MRMR feature ranking (F-statistic relevance,
//!    Pearson redundancy, quotient scheme).
//! 5. [`models`] — standardization, two-class LDA, random forest, grid
//!    search, model persistence.
//! 6. [`evaluation`] — stratified splits, 5-fold cross-validation with a
//!    fixed holdout, and the five classification metrics.
//! 7. [`synth`] — deterministic synthetic cohort generation with known
//!    ground truth, for oracle tests and end-to-end runs.

pub mod error;
pub mod evaluation;
pub mod features;
pub mod geometry;
pub mod ingest;
pub mod models;
pub mod selection;
pub mod synth;

pub use error::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// The six labeled cardiac phases (out of 30).
pub const PHASES: [u8; 6] = [0, 5, 10, 15, 20, 25];

/// Number of anatomical insertion points per patient (P0..P5).
pub const NUM_POINTS: usize = 6;

/// Number of labeled phases.
pub const NUM_PHASES: usize = 6;
