//! Core domain types shared by the whole pipeline.
//!
//! Everything here is an immutable value type once constructed; the
//! constructors are where the invariants are enforced.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("stroke {0} has no samples")]
    EmptyStroke(StrokeId),
    #[error("stroke {stroke}: sample {index} has a non-finite coordinate")]
    NonFinite { stroke: StrokeId, index: usize },
    #[error("stroke {stroke}: sample index t is not strictly increasing at position {index}")]
    NonMonotoneTime { stroke: StrokeId, index: usize },
    #[error("glyph has no strokes")]
    EmptyGlyph,
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A planar position in whatever units the caller is working in.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

/// One pen sample. `t` is an ordinal sample index, not wall-clock time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub t: u64,
}

impl Sample {
    pub const fn new(x: f64, y: f64, t: u64) -> Self {
        Self { x, y, t }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrokeId(pub u32);

impl fmt::Display for StrokeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The trace between one pen-down and the following pen-up.
#[derive(Debug, Clone, PartialEq)]
pub struct Stroke {
    id: StrokeId,
    samples: Vec<Sample>,
}

impl Stroke {
    pub fn new(id: StrokeId, samples: Vec<Sample>) -> Result<Self, ModelError> {
        if samples.is_empty() {
            return Err(ModelError::EmptyStroke(id));
        }
        for (index, s) in samples.iter().enumerate() {
            if !s.x.is_finite() || !s.y.is_finite() {
                return Err(ModelError::NonFinite { stroke: id, index });
            }
        }
        if let Some(index) = samples.windows(2).position(|w| w[1].t <= w[0].t) {
            return Err(ModelError::NonMonotoneTime {
                stroke: id,
                index: index + 1,
            });
        }
        Ok(Self { id, samples })
    }

    /// Builds a stroke from bare positions, numbering samples 0, 1, 2, ...
    pub fn from_points(id: StrokeId, points: &[(f64, f64)]) -> Result<Self, ModelError> {
        let samples = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Sample::new(x, y, i as u64))
            .collect();
        Self::new(id, samples)
    }

    pub fn id(&self) -> StrokeId {
        self.id
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn point(&self, index: usize) -> Point {
        self.samples[index].point()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = Point> + '_ {
        self.samples.iter().map(Sample::point)
    }

    pub fn xs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.y).collect()
    }

    /// First and last sample indices, the stroke's time interval.
    pub fn time_interval(&self) -> (u64, u64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }

    pub fn first(&self) -> Point {
        self.point(0)
    }

    pub fn last(&self) -> Point {
        self.point(self.samples.len() - 1)
    }

    pub fn x_range(&self) -> (f64, f64) {
        min_max(self.samples.iter().map(|s| s.x))
    }

    pub fn y_range(&self) -> (f64, f64) {
        min_max(self.samples.iter().map(|s| s.y))
    }

    pub fn y_span(&self) -> f64 {
        let (lo, hi) = self.y_range();
        hi - lo
    }

    pub fn x_span(&self) -> f64 {
        let (lo, hi) = self.x_range();
        hi - lo
    }

    /// Polyline length through the samples in order.
    pub fn arc_length(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[0].point().distance(w[1].point()))
            .sum()
    }

    /// Returns a copy with every position mapped through `f`; ids and `t` are kept.
    pub fn map_points(&self, mut f: impl FnMut(usize, Point) -> Point) -> Stroke {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let p = f(i, s.point());
                Sample::new(p.x, p.y, s.t)
            })
            .collect();
        Stroke {
            id: self.id,
            samples,
        }
    }

    /// Replaces the positions wholesale, renumbering `t` from the first
    /// original sample index. Used by resampling, which changes the count.
    pub fn with_positions(&self, points: Vec<Point>) -> Stroke {
        let t0 = self.samples[0].t;
        let samples = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| Sample::new(p.x, p.y, t0 + i as u64))
            .collect();
        Stroke {
            id: self.id,
            samples,
        }
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// A segmented character: its strokes plus normalization metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Glyph {
    strokes: Vec<Stroke>,
    main_stroke_id: StrokeId,
    scale_factor: f64,
    label: Option<String>,
}

impl Glyph {
    pub fn new(strokes: Vec<Stroke>, label: Option<String>) -> Result<Self, ModelError> {
        let main_stroke_id = main_stroke(&strokes).ok_or(ModelError::EmptyGlyph)?;
        Ok(Self {
            strokes,
            main_stroke_id,
            scale_factor: 1.0,
            label,
        })
    }

    /// Rebuilds a glyph around transformed strokes (same ids), recording the
    /// normalization divisor. The main stroke chosen on the raw glyph is kept.
    pub(crate) fn with_strokes(&self, strokes: Vec<Stroke>, scale_factor: f64) -> Glyph {
        debug_assert!(strokes.iter().any(|s| s.id() == self.main_stroke_id));
        Glyph {
            strokes,
            main_stroke_id: self.main_stroke_id,
            scale_factor,
            label: self.label.clone(),
        }
    }

    pub fn strokes(&self) -> &[Stroke] {
        &self.strokes
    }

    pub fn stroke(&self, id: StrokeId) -> Option<&Stroke> {
        self.strokes.iter().find(|s| s.id() == id)
    }

    pub fn main_stroke_id(&self) -> StrokeId {
        self.main_stroke_id
    }

    pub fn main_stroke(&self) -> &Stroke {
        self.stroke(self.main_stroke_id)
            .expect("main stroke id always refers to a member stroke")
    }

    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Bounding box as (min, max).
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.strokes.iter().flat_map(Stroke::points) {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}

/// Stroke with the largest y-span; ties go to the lowest stroke id.
pub fn main_stroke(strokes: &[Stroke]) -> Option<StrokeId> {
    strokes
        .iter()
        .map(|s| (s.y_span(), s.id()))
        .fold(None, |best: Option<(f64, StrokeId)>, (span, id)| match best {
            Some((b_span, b_id)) if b_span > span || (b_span == span && b_id < id) => best,
            _ => Some((span, id)),
        })
        .map(|(_, id)| id)
}

/// One written word with its transcription.
#[derive(Debug, Clone, PartialEq)]
pub struct WordRecord {
    pub script: String,
    pub transcription: String,
    pub strokes: Vec<Stroke>,
    /// Stroke groups supplied with the input, bypassing automatic segmentation.
    pub segmentation: Option<Vec<Vec<StrokeId>>>,
    /// Populated by preprocessing.
    pub glyphs: Option<Vec<Glyph>>,
}

impl WordRecord {
    pub fn new(script: impl Into<String>, transcription: impl Into<String>, strokes: Vec<Stroke>) -> Self {
        Self {
            script: script.into(),
            transcription: transcription.into(),
            strokes,
            segmentation: None,
            glyphs: None,
        }
    }
}

/// The shape-point taxonomy. `I` (interior) exists for completeness only and
/// is never detected or counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShapePointKind {
    I,
    E,
    B,
    X,
    C,
    T,
    D,
    A,
}

impl ShapePointKind {
    pub const ALL: [ShapePointKind; 8] = [
        ShapePointKind::I,
        ShapePointKind::E,
        ShapePointKind::B,
        ShapePointKind::X,
        ShapePointKind::C,
        ShapePointKind::T,
        ShapePointKind::D,
        ShapePointKind::A,
    ];

    /// The seven kinds that are detected and counted.
    pub const COUNTED: [ShapePointKind; 7] = [
        ShapePointKind::E,
        ShapePointKind::B,
        ShapePointKind::X,
        ShapePointKind::C,
        ShapePointKind::T,
        ShapePointKind::D,
        ShapePointKind::A,
    ];

    pub const fn codimension(self) -> u32 {
        match self {
            ShapePointKind::I | ShapePointKind::E | ShapePointKind::B | ShapePointKind::X => 0,
            ShapePointKind::C | ShapePointKind::T | ShapePointKind::D => 1,
            ShapePointKind::A => 2,
        }
    }

    pub const fn is_stable(self) -> bool {
        self.codimension() == 0
    }

    /// Number of provenance samples a detected point of this kind carries.
    pub const fn arity(self) -> usize {
        match self {
            ShapePointKind::X | ShapePointKind::T | ShapePointKind::A => 2,
            _ => 1,
        }
    }

    pub const fn symbol(self) -> &'static str {
        match self {
            ShapePointKind::I => "I",
            ShapePointKind::E => "E",
            ShapePointKind::B => "B",
            ShapePointKind::X => "X",
            ShapePointKind::C => "C",
            ShapePointKind::T => "T",
            ShapePointKind::D => "D",
            ShapePointKind::A => "A",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.symbol().eq_ignore_ascii_case(s))
    }

    fn census_slot(self) -> Option<usize> {
        Self::COUNTED.iter().position(|&k| k == self)
    }
}

impl fmt::Display for ShapePointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

pub fn codimension_of(kind: ShapePointKind) -> u32 {
    kind.codimension()
}

/// A reference to one sample of one stroke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SampleRef {
    pub stroke: StrokeId,
    pub index: usize,
}

impl SampleRef {
    pub const fn new(stroke: StrokeId, index: usize) -> Self {
        Self { stroke, index }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapePoint {
    pub kind: ShapePointKind,
    pub position: Point,
    pub provenance: Vec<SampleRef>,
}

impl ShapePoint {
    pub fn new(kind: ShapePointKind, position: Point, provenance: Vec<SampleRef>) -> Self {
        debug_assert_eq!(provenance.len(), kind.arity(), "provenance arity for {kind}");
        Self {
            kind,
            position,
            provenance,
        }
    }
}

/// Per-kind counts N_i over the seven counted kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ShapePointCensus {
    counts: [u32; 7],
}

impl ShapePointCensus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(ShapePointKind, u32)]) -> Self {
        let mut c = Self::default();
        for &(k, n) in pairs {
            c.add(k, n);
        }
        c
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a ShapePoint>) -> Self {
        let mut c = Self::default();
        for p in points {
            c.add(p.kind, 1);
        }
        c
    }

    pub fn get(&self, kind: ShapePointKind) -> u32 {
        kind.census_slot().map_or(0, |i| self.counts[i])
    }

    /// Adds `n` points of `kind`. Interior points are not counted and are ignored.
    pub fn add(&mut self, kind: ShapePointKind, n: u32) {
        if let Some(i) = kind.census_slot() {
            self.counts[i] += n;
        }
    }

    pub fn merge(&mut self, other: &ShapePointCensus) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (ShapePointKind, u32)> + '_ {
        ShapePointKind::COUNTED.into_iter().zip(self.counts)
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn stable_total(&self) -> u32 {
        self.iter().filter(|(k, _)| k.is_stable()).map(|(_, n)| n).sum()
    }

    pub fn unstable_total(&self) -> u32 {
        self.iter().filter(|(k, _)| !k.is_stable()).map(|(_, n)| n).sum()
    }
}

impl std::ops::Add for ShapePointCensus {
    type Output = ShapePointCensus;

    fn add(mut self, rhs: Self) -> Self {
        self.merge(&rhs);
        self
    }
}

impl std::iter::Sum for ShapePointCensus {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

impl fmt::Display for ShapePointCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (k, n) in self.iter().filter(|(_, n)| *n > 0) {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{n}")?;
            first = false;
        }
        f.write_str("}")
    }
}

impl Serialize for ShapePointCensus {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, u32> = self.iter().map(|(k, n)| (k.symbol(), n)).collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ShapePointCensus {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, u32>::deserialize(deserializer)?;
        let mut c = ShapePointCensus::default();
        for (k, n) in map {
            match ShapePointKind::from_symbol(&k) {
                Some(ShapePointKind::I) | None => {
                    return Err(serde::de::Error::custom(format!("unknown shape point kind {k:?}")))
                }
                Some(kind) => c.add(kind, n),
            }
        }
        Ok(c)
    }
}

/// Tunables for smoothing, resampling and shape-point detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Gaussian width in samples.
    pub sigma_s: f64,
    pub kernel_window: usize,
    /// Kernel centre on the 1-based window axis.
    pub mu: f64,
    pub resample_n: usize,
    /// Vanishing-derivative threshold, as a fraction of the stroke's mean
    /// per-sample speed.
    pub eps_deriv: f64,
    /// Identification radius, normalized units.
    pub delta_id: f64,
    /// Strokes shorter than this are dots, normalized units.
    pub delta_dot: f64,
    /// Tangent turn (degrees) above which a speed minimum is a cusp.
    pub theta_cusp: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            sigma_s: 3.0,
            kernel_window: 21,
            mu: 11.0,
            resample_n: 64,
            eps_deriv: 0.05,
            delta_id: 0.05,
            delta_dot: 0.02,
            theta_cusp: 120.0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: &str| Err(ModelError::Config(msg.to_string()));
        if !(self.sigma_s > 0.0 && self.sigma_s.is_finite()) {
            return bad("sigma_s must be positive");
        }
        if self.kernel_window == 0 || self.kernel_window.is_multiple_of(2) {
            return bad("kernel_window must be an odd positive integer");
        }
        if !self.mu.is_finite() {
            return bad("mu must be finite");
        }
        if self.resample_n < 2 {
            return bad("resample_n must be at least 2");
        }
        for (name, v) in [
            ("eps_deriv", self.eps_deriv),
            ("delta_id", self.delta_id),
            ("delta_dot", self.delta_dot),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::Config(format!("{name} must be strictly positive")));
            }
        }
        if !(self.theta_cusp > 90.0 && self.theta_cusp < 180.0) {
            return bad("theta_cusp must lie in (90, 180) degrees");
        }
        Ok(())
    }
}
