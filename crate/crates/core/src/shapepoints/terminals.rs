//! End, T and Angle points: the fate of every stroke terminal.
//!
//! Each terminal of a non-dot stroke ends up as exactly one of
//!
//! * half of an Angle, when it is paired with another identified terminal
//!   (greedy, closest pairs first);
//! * a T, when it is identified with some other sample but left unpaired;
//! * an End, when nothing is identified with it.

use crate::model::{Glyph, PipelineConfig, SampleRef, ShapePoint, ShapePointKind, Stroke};

use super::identify::{identify_in, SampleGrid};
use super::{active_strokes, stroke_by_id};

#[derive(Debug, Default)]
pub(crate) struct TerminalFates {
    pub ends: Vec<ShapePoint>,
    pub tees: Vec<ShapePoint>,
    pub angles: Vec<ShapePoint>,
}

pub fn detect_end_points(glyph: &Glyph, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    resolve_terminals(glyph, cfg).ends
}

pub fn detect_t_points(glyph: &Glyph, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    resolve_terminals(glyph, cfg).tees
}

pub fn detect_angle_points(glyph: &Glyph, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    resolve_terminals(glyph, cfg).angles
}

/// Terminal sample references of the non-dot strokes, ordered by stroke id
/// then index.
pub(crate) fn terminal_refs(strokes: &[&Stroke]) -> Vec<SampleRef> {
    strokes
        .iter()
        .flat_map(|s| [SampleRef::new(s.id(), 0), SampleRef::new(s.id(), s.len() - 1)])
        .collect()
}

pub(crate) fn resolve_terminals(glyph: &Glyph, cfg: &PipelineConfig) -> TerminalFates {
    let strokes = active_strokes(glyph, cfg);
    let terminals = terminal_refs(&strokes);
    let grid = SampleGrid::new(strokes.iter().copied(), cfg.delta_id);
    let point = |r: SampleRef| stroke_by_id(&strokes, r.stroke).point(r.index);
    let is_terminal = |r: &SampleRef| terminals.binary_search(r).is_ok();

    // For each terminal: every sample identified with it.
    let partners: Vec<Vec<SampleRef>> = terminals
        .iter()
        .map(|&t| {
            let st = stroke_by_id(&strokes, t.stroke);
            let mut found: Vec<SampleRef> = grid
                .near(point(t))
                .filter(|&r| r != t)
                .filter(|&r| identify_in(st, t.index, stroke_by_id(&strokes, r.stroke), r.index, cfg.delta_id))
                .collect();
            found.sort();
            found
        })
        .collect();

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (a, ta) in terminals.iter().enumerate() {
        for r in partners[a].iter().filter(|r| is_terminal(r)) {
            let b = terminals.binary_search(r).expect("terminal");
            if b > a {
                pairs.push((point(*ta).distance(point(*r)), a, b));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut matched = vec![false; terminals.len()];
    let mut fates = TerminalFates::default();
    for (_, a, b) in pairs {
        if matched[a] || matched[b] {
            continue;
        }
        matched[a] = true;
        matched[b] = true;
        let (ta, tb) = (terminals[a], terminals[b]);
        fates.angles.push(ShapePoint::new(
            ShapePointKind::A,
            point(ta).midpoint(point(tb)),
            vec![ta, tb],
        ));
    }

    for (i, &t) in terminals.iter().enumerate() {
        if matched[i] {
            continue;
        }
        let p = point(t);
        let nearest = partners[i]
            .iter()
            .min_by(|x, y| point(**x).distance(p).total_cmp(&point(**y).distance(p)).then(x.cmp(y)));
        match nearest {
            Some(&r) => fates.tees.push(ShapePoint::new(ShapePointKind::T, p, vec![t, r])),
            None => fates.ends.push(ShapePoint::new(ShapePointKind::E, p, vec![t])),
        }
    }
    fates
}
