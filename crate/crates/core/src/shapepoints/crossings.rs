use crate::model::{Glyph, PipelineConfig, Point, SampleRef, ShapePoint, ShapePointKind, Stroke};

use super::terminals::terminal_refs;
use super::{active_strokes, stroke_by_id};

/// Transversal crossings between polyline segments, either of two strokes
/// or of one stroke with a non-adjacent segment of itself.
///
/// Crossings within `delta_id` of a stroke terminal are left to the
/// terminal kinds; crossings within `delta_id` of an earlier one merge.
pub fn detect_cross_points(glyph: &Glyph, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    let strokes = active_strokes(glyph, cfg);
    let terminals: Vec<Point> = terminal_refs(&strokes)
        .into_iter()
        .map(|r| stroke_by_id(&strokes, r.stroke).point(r.index))
        .collect();

    let mut kept: Vec<ShapePoint> = Vec::new();
    for (a, b) in candidate_pairs(&strokes) {
        let sa = stroke_by_id(&strokes, a.stroke);
        let sb = stroke_by_id(&strokes, b.stroke);
        let Some(p) = segment_intersection(
            sa.point(a.index),
            sa.point(a.index + 1),
            sb.point(b.index),
            sb.point(b.index + 1),
        ) else {
            continue;
        };
        if terminals.iter().any(|t| t.distance(p) <= cfg.delta_id) {
            continue;
        }
        if kept.iter().any(|k| k.position.distance(p) <= cfg.delta_id) {
            continue;
        }
        kept.push(ShapePoint::new(ShapePointKind::X, p, vec![a, b]));
    }
    kept
}

/// Intersection point of segments p1-p2 and q1-q2 when they cross at a
/// single point (parallel and collinear pairs yield `None`).
pub fn segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Option<Point> {
    let (rx, ry) = (p2.x - p1.x, p2.y - p1.y);
    let (sx, sy) = (q2.x - q1.x, q2.y - q1.y);
    let denom = rx * sy - ry * sx;
    if denom == 0.0 {
        return None;
    }
    let (wx, wy) = (q1.x - p1.x, q1.y - p1.y);
    let t = (wx * sy - wy * sx) / denom;
    let u = (wx * ry - wy * rx) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(Point::new(p1.x + t * rx, p1.y + t * ry))
    } else {
        None
    }
}

/// Segment pairs whose bounding boxes overlap, found by sweeping along x,
/// returned in lexicographic (first segment, second segment) order.
fn candidate_pairs(strokes: &[&Stroke]) -> Vec<(SampleRef, SampleRef)> {
    struct Seg {
        id: SampleRef,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    }
    let mut segs: Vec<Seg> = strokes
        .iter()
        .flat_map(|s| {
            (0..s.len() - 1).map(move |i| {
                let (a, b) = (s.point(i), s.point(i + 1));
                Seg {
                    id: SampleRef::new(s.id(), i),
                    x0: a.x.min(b.x),
                    x1: a.x.max(b.x),
                    y0: a.y.min(b.y),
                    y1: a.y.max(b.y),
                }
            })
        })
        .collect();
    segs.sort_by(|a, b| a.x0.total_cmp(&b.x0).then(a.id.cmp(&b.id)));

    let mut pairs = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for (i, s) in segs.iter().enumerate() {
        active.retain(|&j| segs[j].x1 >= s.x0);
        for &j in &active {
            let o = &segs[j];
            if o.y1 < s.y0 || s.y1 < o.y0 {
                continue;
            }
            let (a, b) = if o.id < s.id { (o.id, s.id) } else { (s.id, o.id) };
            if a.stroke == b.stroke && b.index < a.index + 2 {
                continue;
            }
            pairs.push((a, b));
        }
        active.push(i);
    }
    pairs.sort_unstable();
    pairs
}
