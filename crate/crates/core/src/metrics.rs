//! Complexity measures: net shape complexity, per-unicode densities,
//! curvelength, stability index and strokes per unicode.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::count_unicodes;
use crate::model::{Glyph, PipelineConfig, ShapePointCensus, ShapePointKind, WordRecord};
use crate::shapepoints::classify_glyph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("word {0:?} has no countable unicode characters")]
    ZeroUnicodes(String),
    #[error("rows mix scripts {0:?} and {1:?}")]
    MixedScripts(String, String),
    #[error("word {0:?} has not been preprocessed")]
    NotPreprocessed(String),
    #[error("no rows to summarize")]
    Empty,
}

/// Which kinds Complexity #3 counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum C3Kinds {
    /// All four unstable kinds.
    #[default]
    Ctda,
    /// Cusp, T and Dot only.
    Ctd,
}

impl std::str::FromStr for C3Kinds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ctda" => Ok(C3Kinds::Ctda),
            "ctd" => Ok(C3Kinds::Ctd),
            other => Err(format!("unknown c3 kind set {other:?} (expected ctda or ctd)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantName {
    C1,
    C2,
    C3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityVariant {
    pub name: VariantName,
    pub included_kinds: Vec<ShapePointKind>,
}

impl ComplexityVariant {
    /// All seven kinds.
    pub fn c1() -> Self {
        Self {
            name: VariantName::C1,
            included_kinds: ShapePointKind::COUNTED.to_vec(),
        }
    }

    /// Everything except End points.
    pub fn c2() -> Self {
        Self {
            name: VariantName::C2,
            included_kinds: ShapePointKind::COUNTED
                .into_iter()
                .filter(|&k| k != ShapePointKind::E)
                .collect(),
        }
    }

    pub fn c3(kinds: C3Kinds) -> Self {
        use ShapePointKind::*;
        let included_kinds = match kinds {
            C3Kinds::Ctda => vec![C, T, D, A],
            C3Kinds::Ctd => vec![C, T, D],
        };
        Self {
            name: VariantName::C3,
            included_kinds,
        }
    }
}

/// Σ (1 + codimension) · N over the variant's kinds.
pub fn net_shape_complexity(census: &ShapePointCensus, variant: &ComplexityVariant) -> u64 {
    variant
        .included_kinds
        .iter()
        .map(|&k| (1 + k.codimension() as u64) * census.get(k) as u64)
        .sum()
}

pub fn shape_complexity_per_unicode(net: u64, unicode_count: usize) -> Result<f64, MetricsError> {
    if unicode_count == 0 {
        return Err(MetricsError::ZeroUnicodes(String::new()));
    }
    Ok(net as f64 / unicode_count as f64)
}

pub fn strokes_per_unicode(stroke_count: usize, unicode_count: usize) -> Result<f64, MetricsError> {
    if unicode_count == 0 {
        return Err(MetricsError::ZeroUnicodes(String::new()));
    }
    Ok(stroke_count as f64 / unicode_count as f64)
}

/// Total polyline length of all strokes.
pub fn curvelength(glyph: &Glyph) -> f64 {
    glyph.strokes().iter().map(|s| s.arc_length()).sum()
}

/// Stable over unstable shape-point counts; unbounded when nothing is unstable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Stability {
    Finite(f64),
    Unbounded,
}

impl Stability {
    /// Ordering key: unbounded sorts above every finite value.
    pub fn as_f64(self) -> f64 {
        match self {
            Stability::Finite(v) => v,
            Stability::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Stability::Unbounded)
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stability::Finite(v) => write!(f, "{v}"),
            Stability::Unbounded => f.write_str("∞"),
        }
    }
}

pub fn stability_index(census: &ShapePointCensus) -> Stability {
    let unstable = census.unstable_total();
    if unstable == 0 {
        Stability::Unbounded
    } else {
        Stability::Finite(census.stable_total() as f64 / unstable as f64)
    }
}

/// Every numeric measure for one word or one script.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measures {
    pub unicode_count: usize,
    pub stroke_count: usize,
    pub census: ShapePointCensus,
    pub net_c1: u64,
    pub net_c2: u64,
    pub net_c3: u64,
    pub c1_per_unicode: f64,
    pub c2_per_unicode: f64,
    pub c3_per_unicode: f64,
    pub curvelength: f64,
    pub curvelength_per_unicode: f64,
    pub stability: Stability,
    pub strokes_per_unicode: f64,
}

impl Measures {
    /// Derives every field from the four primary totals.
    pub fn from_totals(
        unicode_count: usize,
        stroke_count: usize,
        census: ShapePointCensus,
        curvelength: f64,
        c3: C3Kinds,
    ) -> Result<Self, MetricsError> {
        let net_c1 = net_shape_complexity(&census, &ComplexityVariant::c1());
        let net_c2 = net_shape_complexity(&census, &ComplexityVariant::c2());
        let net_c3 = net_shape_complexity(&census, &ComplexityVariant::c3(c3));
        Ok(Self {
            unicode_count,
            stroke_count,
            census,
            net_c1,
            net_c2,
            net_c3,
            c1_per_unicode: shape_complexity_per_unicode(net_c1, unicode_count)?,
            c2_per_unicode: shape_complexity_per_unicode(net_c2, unicode_count)?,
            c3_per_unicode: shape_complexity_per_unicode(net_c3, unicode_count)?,
            curvelength,
            curvelength_per_unicode: curvelength / unicode_count as f64,
            stability: stability_index(&census),
            strokes_per_unicode: strokes_per_unicode(stroke_count, unicode_count)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub script: String,
    pub word: String,
    #[serde(flatten)]
    pub measures: Measures,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScriptSummary {
    pub script: String,
    pub words: usize,
    #[serde(flatten)]
    pub measures: Measures,
}

/// Census of a preprocessed word, summed over its glyphs.
pub fn word_census(word: &WordRecord, cfg: &PipelineConfig) -> Result<ShapePointCensus, MetricsError> {
    let glyphs = word
        .glyphs
        .as_ref()
        .ok_or_else(|| MetricsError::NotPreprocessed(word.transcription.clone()))?;
    Ok(glyphs.iter().map(|g| classify_glyph(g, cfg).1).sum())
}

pub fn compute_row(word: &WordRecord, cfg: &PipelineConfig, c3: C3Kinds) -> Result<MetricsRow, MetricsError> {
    let census = word_census(word, cfg)?;
    let glyphs = word.glyphs.as_deref().unwrap_or_default();
    let length: f64 = glyphs.iter().map(curvelength).sum();
    let unicodes = count_unicodes(&word.transcription);
    let measures = Measures::from_totals(unicodes, word.strokes.len(), census, length, c3)
        .map_err(|_| MetricsError::ZeroUnicodes(word.transcription.clone()))?;
    Ok(MetricsRow {
        script: word.script.clone(),
        word: word.transcription.clone(),
        measures,
    })
}

/// Ratio of sums over a single script's rows.
pub fn summarize_script(rows: &[MetricsRow], c3: C3Kinds) -> Result<ScriptSummary, MetricsError> {
    let first = rows.first().ok_or(MetricsError::Empty)?;
    if let Some(other) = rows.iter().find(|r| r.script != first.script) {
        return Err(MetricsError::MixedScripts(first.script.clone(), other.script.clone()));
    }
    let mut sorted: Vec<&MetricsRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.word.cmp(&b.word));
    let (mut unicodes, mut strokes, mut length) = (0usize, 0usize, 0.0f64);
    let mut census = ShapePointCensus::new();
    for r in sorted {
        unicodes += r.measures.unicode_count;
        strokes += r.measures.stroke_count;
        length += r.measures.curvelength;
        census.merge(&r.measures.census);
    }
    Ok(ScriptSummary {
        script: first.script.clone(),
        words: rows.len(),
        measures: Measures::from_totals(unicodes, strokes, census, length, c3)?,
    })
}
