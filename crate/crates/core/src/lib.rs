//! Shape-point analysis and script complexity measures for online
//! handwriting.
//!
//! The pipeline runs `ingest` → `preprocess` → `shapepoints` → `metrics` →
//! `report`; `synth` holds the synthetic glyph bed and the brute-force census
//! used to check the detectors, and `cli` wires it all to the command line.

pub mod cli;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod preprocess;
pub mod report;
pub mod shapepoints;
pub mod synth;

pub use model::{
    codimension_of, Glyph, PipelineConfig, Point, Sample, SampleRef, ShapePoint, ShapePointCensus,
    ShapePointKind, Stroke, StrokeId, WordRecord,
};
