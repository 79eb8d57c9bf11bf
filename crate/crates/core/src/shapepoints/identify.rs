use std::collections::HashMap;

use crate::model::{Glyph, PipelineConfig, Point, SampleRef, Stroke};

/// Two samples are identified when they lie within `delta_id` of each other
/// and belong to different strokes, or to the same stroke with the trace
/// leaving the `delta_id` neighbourhood somewhere between them.
///
/// The excursion requirement replaces a bare index gap: at 64 samples per
/// stroke, neighbours two or three steps apart are routinely closer than
/// `delta_id` without the stroke ever returning to itself.
pub fn identify(glyph: &Glyph, a: SampleRef, b: SampleRef, cfg: &PipelineConfig) -> bool {
    let (Some(sa), Some(sb)) = (glyph.stroke(a.stroke), glyph.stroke(b.stroke)) else {
        return false;
    };
    identify_in(sa, a.index, sb, b.index, cfg.delta_id)
}

pub(crate) fn identify_in(sa: &Stroke, ia: usize, sb: &Stroke, ib: usize, delta: f64) -> bool {
    let (pa, pb) = (sa.point(ia), sb.point(ib));
    if pa.distance(pb) > delta {
        return false;
    }
    if sa.id() != sb.id() {
        return true;
    }
    let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
    if hi - lo < 2 {
        return false;
    }
    (lo + 1..hi).any(|k| {
        let pk = sa.point(k);
        pk.distance(pa) > delta || pk.distance(pb) > delta
    })
}

/// Uniform grid over sample positions for radius queries.
pub(crate) struct SampleGrid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<SampleRef>>,
}

impl SampleGrid {
    pub fn new<'a>(strokes: impl IntoIterator<Item = &'a Stroke>, radius: f64) -> Self {
        let cell = (radius * 1.001).max(1e-9);
        let mut cells: HashMap<(i64, i64), Vec<SampleRef>> = HashMap::new();
        for s in strokes {
            for (i, p) in s.points().enumerate() {
                cells
                    .entry(key(p, cell))
                    .or_default()
                    .push(SampleRef::new(s.id(), i));
            }
        }
        Self { cell, cells }
    }

    /// Every indexed sample in the 3x3 block of cells around `p`; callers
    /// apply the exact distance test.
    pub fn near(&self, p: Point) -> impl Iterator<Item = SampleRef> + '_ {
        let (cx, cy) = key(p, self.cell);
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (cx + dx, cy + dy)))
            .filter_map(|k| self.cells.get(&k))
            .flatten()
            .copied()
    }
}

fn key(p: Point, cell: f64) -> (i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
}
