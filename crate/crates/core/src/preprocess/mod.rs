//! Character segmentation, size normalization, Gaussian smoothing and
//! arc-length resampling, applied in that order.

mod normalize;
mod resample;
mod segment;
mod smooth;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Glyph, PipelineConfig, WordRecord};

pub use normalize::{normalize_glyph, normalize_with_fallback};
pub use resample::resample_stroke;
pub use segment::{glyphs_from_groups, segment_characters};
pub use smooth::{kernel, raw_kernel_value, smooth_stroke};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("every stroke of the glyph has zero height")]
    DegenerateGlyph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentationParams {
    /// Share of the narrower x-extent two strokes must overlap to join.
    pub overlap_fraction: f64,
    /// x-projection gap (device units) at or above which strokes are separate.
    pub gap_threshold: f64,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        Self {
            overlap_fraction: 0.1,
            gap_threshold: 1.0,
        }
    }
}

impl SegmentationParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.overlap_fraction) {
            return Err("overlap_fraction must lie in [0, 1]".into());
        }
        if !(self.gap_threshold > 0.0 && self.gap_threshold.is_finite()) {
            return Err("gap_threshold must be positive".into());
        }
        Ok(())
    }
}

/// Normalizes, smooths and resamples one already-segmented glyph.
pub fn prepare_glyph(glyph: &Glyph, cfg: &PipelineConfig) -> Glyph {
    let normalized = normalize_with_fallback(glyph);
    let strokes = normalized
        .strokes()
        .iter()
        .map(|s| resample_stroke(&smooth_stroke(s, cfg), cfg.resample_n))
        .collect();
    normalized.with_strokes(strokes, normalized.scale_factor())
}

/// Runs all four preprocessing steps and returns the word with glyphs filled in.
pub fn preprocess_word(word: &WordRecord, params: &SegmentationParams, cfg: &PipelineConfig) -> WordRecord {
    let raw_glyphs = match &word.segmentation {
        Some(groups) => glyphs_from_groups(word, groups),
        None => segment_characters(word, params),
    };
    let glyphs = raw_glyphs.iter().map(|g| prepare_glyph(g, cfg)).collect();
    WordRecord {
        glyphs: Some(glyphs),
        ..word.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Stroke, StrokeId};

    fn stroke(id: u32, pts: &[(f64, f64)]) -> Stroke {
        Stroke::from_points(StrokeId(id), pts).unwrap()
    }

    fn five_stroke_word() -> WordRecord {
        // two characters: strokes 0-2 around x in [0, 40], strokes 3-4 around [100, 140]
        WordRecord::new(
            "test",
            "कख",
            vec![
                stroke(0, &[(0.0, 0.0), (10.0, 40.0), (20.0, 80.0)]),
                stroke(1, &[(5.0, 10.0), (25.0, 10.0), (40.0, 12.0)]),
                stroke(2, &[(15.0, 90.0)]),
                stroke(3, &[(100.0, 0.0), (120.0, 60.0), (140.0, 0.0)]),
                stroke(4, &[(110.0, 30.0), (130.0, 30.0)]),
            ],
        )
    }

    #[test]
    fn every_stroke_is_resampled() {
        let cfg = PipelineConfig::default();
        let out = preprocess_word(&five_stroke_word(), &SegmentationParams::default(), &cfg);
        let glyphs = out.glyphs.unwrap();
        assert_eq!(glyphs.len(), 2);
        let total: usize = glyphs.iter().map(|g| g.strokes().len()).sum();
        assert_eq!(total, 5);
        for g in &glyphs {
            for s in g.strokes() {
                assert_eq!(s.len(), cfg.resample_n);
            }
        }
    }

    #[test]
    fn preprocessing_is_deterministic() {
        let cfg = PipelineConfig::default();
        let p = SegmentationParams::default();
        let a = preprocess_word(&five_stroke_word(), &p, &cfg);
        let b = preprocess_word(&five_stroke_word(), &p, &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn supplied_groups_bypass_segmentation() {
        let mut w = five_stroke_word();
        w.segmentation = Some(vec![
            vec![StrokeId(0), StrokeId(1), StrokeId(2), StrokeId(3), StrokeId(4)],
        ]);
        let out = preprocess_word(&w, &SegmentationParams::default(), &PipelineConfig::default());
        assert_eq!(out.glyphs.unwrap().len(), 1);
    }
}
