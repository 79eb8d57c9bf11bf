//! Shape-point detection on preprocessed glyphs.
//!
//! Detectors run independently and produce candidates; [`classify_glyph`]
//! then resolves overlaps with the fixed precedence
//! `D > A > T > X > C > B > E`: a candidate within `delta_id` of an accepted
//! point of a higher-precedence kind is dropped.
//!
//! Dot strokes (curvelength below `delta_dot`) are handled only by the Dot
//! detector; every other detector ignores them. Interior kinds (X, C, B) are
//! never reported within `delta_id` of a stroke terminal, since that
//! neighbourhood belongs to E/T/A.

mod bumps;
mod crossings;
mod cusps;
mod derivative;
mod identify;
mod terminals;

use thiserror::Error;

use crate::model::{
    Glyph, PipelineConfig, Point, SampleRef, ShapePoint, ShapePointCensus, ShapePointKind, Stroke, StrokeId,
};

pub use bumps::detect_bump_points;
pub use crossings::{detect_cross_points, segment_intersection};
pub use cusps::{detect_cusp_points, turn_angle};
pub use derivative::{differentiate, DerivativeSeries};
pub use identify::identify;
pub use terminals::{detect_angle_points, detect_end_points, detect_t_points};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("stroke {0} has fewer than two samples")]
    TooFewSamples(StrokeId),
}

/// Precedence used for arbitration, highest first.
pub const PRECEDENCE: [ShapePointKind; 7] = [
    ShapePointKind::D,
    ShapePointKind::A,
    ShapePointKind::T,
    ShapePointKind::X,
    ShapePointKind::C,
    ShapePointKind::B,
    ShapePointKind::E,
];

pub fn is_dot(stroke: &Stroke, cfg: &PipelineConfig) -> bool {
    stroke.len() < 2 || stroke.arc_length() < cfg.delta_dot
}

/// Non-dot strokes in stroke-id order.
pub(crate) fn active_strokes<'a>(glyph: &'a Glyph, cfg: &PipelineConfig) -> Vec<&'a Stroke> {
    let mut v: Vec<&Stroke> = glyph.strokes().iter().filter(|s| !is_dot(s, cfg)).collect();
    v.sort_by_key(|s| s.id());
    v
}

pub(crate) fn stroke_by_id<'a>(strokes: &[&'a Stroke], id: StrokeId) -> &'a Stroke {
    let i = strokes
        .binary_search_by_key(&id, |s| s.id())
        .expect("reference to a known stroke");
    strokes[i]
}

/// One Dot per stroke shorter than `delta_dot`.
pub fn detect_dot_strokes(glyph: &Glyph, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    let mut dots: Vec<&Stroke> = glyph.strokes().iter().filter(|s| is_dot(s, cfg)).collect();
    dots.sort_by_key(|s| s.id());
    dots.into_iter()
        .map(|s| ShapePoint::new(ShapePointKind::D, s.first(), vec![SampleRef::new(s.id(), 0)]))
        .collect()
}

/// Runs every detector, arbitrates, and counts the survivors.
///
/// Points are returned ordered by their first provenance sample.
pub fn classify_glyph(glyph: &Glyph, cfg: &PipelineConfig) -> (Vec<ShapePoint>, ShapePointCensus) {
    let strokes = active_strokes(glyph, cfg);
    let terminal_points: Vec<Point> = terminals::terminal_refs(&strokes)
        .into_iter()
        .map(|r| stroke_by_id(&strokes, r.stroke).point(r.index))
        .collect();
    let clear_of_terminals =
        |p: &ShapePoint| terminal_points.iter().all(|t| t.distance(p.position) > cfg.delta_id);

    let fates = terminals::resolve_terminals(glyph, cfg);
    let mut cusps = Vec::new();
    let mut bumps = Vec::new();
    for s in &strokes {
        let d = differentiate(s).expect("non-dot strokes have at least two samples");
        cusps.extend(detect_cusp_points(s, &d, cfg).into_iter().filter(&clear_of_terminals));
        bumps.extend(detect_bump_points(s, &d, cfg).into_iter().filter(&clear_of_terminals));
    }

    let by_kind = [
        detect_dot_strokes(glyph, cfg),
        fates.angles,
        fates.tees,
        detect_cross_points(glyph, cfg),
        cusps,
        bumps,
        fates.ends,
    ];
    let mut accepted = arbitrate(by_kind, cfg.delta_id);
    accepted.sort_by(|a, b| a.provenance[0].cmp(&b.provenance[0]).then(a.kind.cmp(&b.kind)));
    let census = ShapePointCensus::from_points(&accepted);
    (accepted, census)
}

/// `by_kind` is indexed like [`PRECEDENCE`].
fn arbitrate(by_kind: [Vec<ShapePoint>; 7], delta: f64) -> Vec<ShapePoint> {
    let mut accepted: Vec<ShapePoint> = Vec::new();
    for candidates in by_kind {
        let higher = accepted.len();
        for c in candidates {
            let blocked = accepted[..higher]
                .iter()
                .any(|a| a.position.distance(c.position) <= delta);
            if !blocked {
                accepted.push(c);
            }
        }
    }
    accepted
}
