//! Synthetic glyphs with known shape-point censuses, a smooth perturbation
//! model, an independent brute-force census, and the studies built on them.

mod oracle;
mod perturb;
mod study;

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Glyph, ShapePointCensus, ShapePointKind, Stroke, StrokeId};

pub use oracle::brute_force_census;
pub use perturb::{perturb, trial_seed};
pub use study::{
    demo_dataset, perturbation_study, random_glyph, survival_table, verify_suite, StudyRow, VerifyFailure,
    VerifyOutcome, RANDOM_GLYPHS, STABLE_SURVIVAL_MIN, STUDY_CASES, UNSTABLE_SURVIVAL_MAX,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("bad synthetic spec: {0}")]
    BadSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticShape {
    Line,
    Circle,
    Arc,
    CuspCurve,
    Lemniscate,
    TJunction,
    Corner,
    Dot,
}

impl SyntheticShape {
    pub const ALL: [SyntheticShape; 8] = [
        SyntheticShape::Line,
        SyntheticShape::Circle,
        SyntheticShape::Arc,
        SyntheticShape::CuspCurve,
        SyntheticShape::Lemniscate,
        SyntheticShape::TJunction,
        SyntheticShape::Corner,
        SyntheticShape::Dot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyntheticShape::Line => "line",
            SyntheticShape::Circle => "circle",
            SyntheticShape::Arc => "arc",
            SyntheticShape::CuspCurve => "cusp_curve",
            SyntheticShape::Lemniscate => "lemniscate",
            SyntheticShape::TJunction => "t_junction",
            SyntheticShape::Corner => "corner",
            SyntheticShape::Dot => "dot",
        }
    }

    /// Census after preprocessing with the default configuration.
    ///
    /// The open lemniscate also carries five bumps: its tangent is
    /// horizontal four times and vertical once along the way.
    pub fn ground_truth(self) -> ShapePointCensus {
        use ShapePointKind::*;
        let pairs: &[(ShapePointKind, u32)] = match self {
            SyntheticShape::Line => &[(E, 2)],
            SyntheticShape::Circle => &[(B, 4), (A, 1)],
            SyntheticShape::Arc => &[(E, 2), (B, 1)],
            SyntheticShape::CuspCurve => &[(E, 2), (C, 1)],
            SyntheticShape::Lemniscate => &[(E, 2), (B, 5), (X, 1)],
            SyntheticShape::TJunction => &[(E, 3), (T, 1)],
            SyntheticShape::Corner => &[(E, 2), (A, 1)],
            SyntheticShape::Dot => &[(D, 1)],
        };
        ShapePointCensus::from_pairs(pairs)
    }

    fn default_samples(self) -> usize {
        match self {
            // dense, so the closure gap left by smoothing stays well inside delta_id
            SyntheticShape::Circle => 400,
            SyntheticShape::CuspCurve | SyntheticShape::Lemniscate => 129,
            SyntheticShape::Dot => 8,
            _ => 64,
        }
    }
}

impl std::str::FromStr for SyntheticShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SyntheticShape::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown shape {s:?}"))
    }
}

/// Recipe for one synthetic glyph. `size` is the glyph height (radius for
/// the circle); `seed` only chooses where the glyph sits in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub shape: SyntheticShape,
    pub samples: usize,
    pub size: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(shape: SyntheticShape) -> Self {
        Self {
            shape,
            samples: shape.default_samples(),
            size: 1.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let min = if self.shape == SyntheticShape::Dot { 1 } else { 2 };
        if self.samples < min {
            return Err(SynthError::BadSpec(format!(
                "{} needs at least {min} samples, got {}",
                self.shape.name(),
                self.samples
            )));
        }
        if !(self.size.is_finite() && self.size > 0.0) {
            return Err(SynthError::BadSpec(format!("size must be positive, got {}", self.size)));
        }
        Ok(())
    }
}

fn sampled(n: usize, t0: f64, t1: f64, f: impl Fn(f64) -> (f64, f64)) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| f(t0 + (t1 - t0) * i as f64 / (n - 1) as f64))
        .collect()
}

fn segment(n: usize, a: (f64, f64), b: (f64, f64)) -> Vec<(f64, f64)> {
    sampled(n, 0.0, 1.0, |t| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)))
}

/// Raw (unnormalized) stroke polylines for a shape at unit size.
fn outline(shape: SyntheticShape, n: usize) -> Vec<Vec<(f64, f64)>> {
    match shape {
        SyntheticShape::Line => vec![segment(n, (0.0, 0.0), (0.6, 1.0))],
        SyntheticShape::Circle => vec![sampled(n, FRAC_PI_4, FRAC_PI_4 + TAU, |a| {
            (0.5 + 0.5 * a.cos(), 0.5 + 0.5 * a.sin())
        })],
        SyntheticShape::Arc => vec![sampled(n, PI / 9.0, 8.0 * PI / 9.0, |a| (a.cos(), a.sin()))],
        SyntheticShape::CuspCurve => vec![sampled(n, -1.0, 1.0, |t| (0.5 * t * t, 0.5 * t * t * t))],
        SyntheticShape::Lemniscate => vec![sampled(n, 0.35, TAU - 0.35, |t| (t.cos(), t.sin() * t.cos()))],
        SyntheticShape::TJunction => vec![segment(n, (0.0, 1.0), (1.0, 1.0)), segment(n, (0.5, 0.0), (0.5, 1.0))],
        SyntheticShape::Corner => vec![segment(n, (0.0, 1.0), (0.0, 0.0)), segment(n, (0.0, 0.0), (0.8, 0.0))],
        SyntheticShape::Dot => vec![vec![(0.5, 0.5); n]],
    }
}

/// Builds the raw glyph for a spec; preprocess it before classifying.
pub fn generate(spec: &SyntheticSpec) -> Result<Glyph, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let offset = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
    let strokes = outline(spec.shape, spec.samples)
        .into_iter()
        .enumerate()
        .map(|(i, pts)| {
            let placed: Vec<(f64, f64)> = pts
                .into_iter()
                .map(|(x, y)| (offset.0 + spec.size * x, offset.1 + spec.size * y))
                .collect();
            Stroke::from_points(StrokeId(i as u32), &placed).expect("synthetic strokes are well formed")
        })
        .collect();
    Ok(Glyph::new(strokes, Some(spec.shape.name().to_string())).expect("at least one stroke"))
}
