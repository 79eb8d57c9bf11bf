use crate::model::{Glyph, Stroke, StrokeId, WordRecord};

use super::SegmentationParams;

/// Groups a word's strokes into characters by x-extent overlap.
///
/// Two strokes are linked when their x-extents, each padded by half of
/// `gap_threshold`, overlap by a positive amount that is at least
/// `overlap_fraction` of the narrower extent. Glyphs are the connected
/// components of that relation, ordered left to right.
pub fn segment_characters(word: &WordRecord, params: &SegmentationParams) -> Vec<Glyph> {
    let strokes = &word.strokes;
    let n = strokes.len();
    let extents: Vec<(f64, f64)> = strokes.iter().map(Stroke::x_range).collect();

    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if linked(extents[i], extents[j], params) {
                union(&mut parent, i, j);
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if group_of_root[r] == usize::MAX {
            group_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of_root[r]].push(i);
    }

    let mut glyphs: Vec<(f64, StrokeId, Glyph)> = groups
        .into_iter()
        .map(|members| {
            let x_min = members.iter().map(|&i| extents[i].0).fold(f64::INFINITY, f64::min);
            let first_id = members.iter().map(|&i| strokes[i].id()).min().expect("non-empty group");
            let group = members.iter().map(|&i| strokes[i].clone()).collect();
            let glyph = Glyph::new(group, None).expect("non-empty group");
            (x_min, first_id, glyph)
        })
        .collect();
    glyphs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    glyphs.into_iter().map(|(_, _, g)| g).collect()
}

/// Builds glyphs from caller-supplied stroke groups, in the given order.
pub fn glyphs_from_groups(word: &WordRecord, groups: &[Vec<StrokeId>]) -> Vec<Glyph> {
    groups
        .iter()
        .filter_map(|ids| {
            let strokes: Vec<Stroke> = ids
                .iter()
                .filter_map(|id| word.strokes.iter().find(|s| s.id() == *id).cloned())
                .collect();
            Glyph::new(strokes, None).ok()
        })
        .collect()
}

fn linked(a: (f64, f64), b: (f64, f64), p: &SegmentationParams) -> bool {
    let overlap = a.1.min(b.1) - a.0.max(b.0) + p.gap_threshold;
    let narrower = (a.1 - a.0).min(b.1 - b.0);
    overlap > 0.0 && overlap >= p.overlap_fraction * narrower
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar(id: u32, x0: f64, x1: f64) -> Stroke {
        Stroke::from_points(StrokeId(id), &[(x0, 0.0), (x1, 10.0)]).unwrap()
    }

    fn word(strokes: Vec<Stroke>) -> WordRecord {
        WordRecord::new("test", "w", strokes)
    }

    /// Independent check: repeatedly merge any two groups containing a
    /// linked pair until nothing changes.
    fn closure_oracle(extents: &[(f64, f64)], p: &SegmentationParams) -> usize {
        let mut groups: Vec<Vec<usize>> = (0..extents.len()).map(|i| vec![i]).collect();
        loop {
            let mut merged = false;
            'outer: for a in 0..groups.len() {
                for b in a + 1..groups.len() {
                    let hit = groups[a]
                        .iter()
                        .any(|&i| groups[b].iter().any(|&j| linked(extents[i], extents[j], p)));
                    if hit {
                        let moved = groups.remove(b);
                        groups[a].extend(moved);
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                return groups.len();
            }
        }
    }

    #[test]
    fn separated_clusters_split() {
        let p = SegmentationParams {
            overlap_fraction: 0.1,
            gap_threshold: 5.0,
        };
        let w = word(vec![bar(0, 0.0, 10.0), bar(1, 20.0, 30.0)]);
        let glyphs = segment_characters(&w, &p);
        assert_eq!(glyphs.len(), 2);
        assert_eq!(closure_oracle(&[(0.0, 10.0), (20.0, 30.0)], &p), 2);
    }

    #[test]
    fn chained_overlap_joins() {
        let p = SegmentationParams {
            overlap_fraction: 0.1,
            gap_threshold: 1.0,
        };
        let w = word(vec![bar(0, 0.0, 10.0), bar(1, 8.0, 18.0), bar(2, 16.0, 26.0)]);
        assert_eq!(segment_characters(&w, &p).len(), 1);
        assert_eq!(closure_oracle(&[(0.0, 10.0), (8.0, 18.0), (16.0, 26.0)], &p), 1);
    }

    #[test]
    fn single_stroke_is_one_glyph() {
        let w = word(vec![bar(0, 0.0, 1.0)]);
        let g = segment_characters(&w, &SegmentationParams::default());
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].strokes().len(), 1);
    }

    #[test]
    fn glyphs_are_ordered_left_to_right() {
        let w = word(vec![bar(0, 50.0, 60.0), bar(1, 0.0, 10.0), bar(2, 52.0, 58.0)]);
        let g = segment_characters(&w, &SegmentationParams::default());
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].strokes()[0].id(), StrokeId(1));
        assert_eq!(g[1].strokes().len(), 2);
    }

    #[test]
    fn dot_above_a_stroke_joins_it() {
        let dot = Stroke::from_points(StrokeId(1), &[(5.0, 15.0)]).unwrap();
        let w = word(vec![bar(0, 0.0, 10.0), dot]);
        assert_eq!(segment_characters(&w, &SegmentationParams::default()).len(), 1);
    }
}
