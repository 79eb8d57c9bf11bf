//! Exhaustive recount of a glyph's shape points.
//!
//! Deliberately naive and self-contained: every sample pair for
//! identification, every segment pair for crossings, a full pass over the
//! derivative signs. Nothing here calls into the detectors.

use crate::model::{Glyph, PipelineConfig, Point, ShapePointCensus, ShapePointKind};

struct Trace {
    id: u32,
    pts: Vec<Point>,
}

fn dist(a: Point, b: Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

fn length(pts: &[Point]) -> f64 {
    let mut total = 0.0;
    for i in 1..pts.len() {
        total += dist(pts[i - 1], pts[i]);
    }
    total
}

/// Same position, different stroke; or same stroke with the trace leaving
/// the neighbourhood somewhere between the two samples.
fn identified(traces: &[Trace], a: (usize, usize), b: (usize, usize), delta: f64) -> bool {
    let pa = traces[a.0].pts[a.1];
    let pb = traces[b.0].pts[b.1];
    if dist(pa, pb) > delta {
        return false;
    }
    if a.0 != b.0 {
        return true;
    }
    let (lo, hi) = (a.1.min(b.1), a.1.max(b.1));
    if hi < lo + 2 {
        return false;
    }
    let pts = &traces[a.0].pts;
    for k in lo + 1..hi {
        if dist(pts[k], pa) > delta || dist(pts[k], pb) > delta {
            return true;
        }
    }
    false
}

fn derivative(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    d[0] = v[1] - v[0];
    d[n - 1] = v[n - 1] - v[n - 2];
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / 2.0;
    }
    d
}

fn sign(v: f64) -> i8 {
    if v < 0.0 {
        -1
    } else {
        1
    }
}

/// Indices where `v` changes sign, ignoring values within `floor` of zero;
/// the crossing sits on the smallest |v| between the two flanking values.
fn sign_changes(v: &[f64], floor: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev: Option<usize> = None;
    for i in 0..v.len() {
        if v[i].abs() <= floor {
            continue;
        }
        if let Some(p) = prev {
            if sign(v[p]) != sign(v[i]) {
                let mut best = p;
                for k in p..=i {
                    if v[k].abs() < v[best].abs() {
                        best = k;
                    }
                }
                out.push(best);
            }
        }
        prev = Some(i);
    }
    out
}

fn bumps(pts: &[Point], cfg: &PipelineConfig) -> Vec<usize> {
    let n = pts.len();
    let dx = derivative(&pts.iter().map(|p| p.x).collect::<Vec<_>>());
    let dy = derivative(&pts.iter().map(|p| p.y).collect::<Vec<_>>());
    let mean = (0..n).map(|i| (dx[i] * dx[i] + dy[i] * dy[i]).sqrt()).sum::<f64>() / n as f64;
    let eps = cfg.eps_deriv * mean;
    let floor = 1e-9 * mean;
    let mut hits = vec![false; n];
    for k in sign_changes(&dx, floor) {
        if dy[k].abs() > eps {
            hits[k] = true;
        }
    }
    for k in sign_changes(&dy, floor) {
        if dx[k].abs() > eps {
            hits[k] = true;
        }
    }
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for k in 1..n.saturating_sub(1) {
        if !hits[k] {
            continue;
        }
        if last.is_none_or(|l| k - l > 2) {
            out.push(k);
        }
        last = Some(k);
    }
    out
}

fn cusps(pts: &[Point], cfg: &PipelineConfig) -> Vec<usize> {
    let n = pts.len();
    if n < 3 {
        return Vec::new();
    }
    let dx = derivative(&pts.iter().map(|p| p.x).collect::<Vec<_>>());
    let dy = derivative(&pts.iter().map(|p| p.y).collect::<Vec<_>>());
    let speed: Vec<f64> = (0..n).map(|i| (dx[i] * dx[i] + dy[i] * dy[i]).sqrt()).collect();
    let mut kept: Vec<(usize, f64)> = Vec::new();
    for i in 1..n - 1 {
        if speed[i] > speed[i - 1] || speed[i] > speed[i + 1] {
            continue;
        }
        let u = (dx[i - 1], dy[i - 1]);
        let v = (dx[i + 1], dy[i + 1]);
        let (lu, lv) = ((u.0 * u.0 + u.1 * u.1).sqrt(), (v.0 * v.0 + v.1 * v.1).sqrt());
        if lu == 0.0 || lv == 0.0 {
            continue;
        }
        let cos = ((u.0 * v.0 + u.1 * v.1) / (lu * lv)).clamp(-1.0, 1.0);
        let turn = cos.acos().to_degrees();
        if turn <= cfg.theta_cusp {
            continue;
        }
        match kept.last_mut() {
            Some(last) if i - last.0 <= 2 => {
                if turn > last.1 {
                    *last = (i, turn);
                }
            }
            _ => kept.push((i, turn)),
        }
    }
    kept.into_iter().map(|(i, _)| i).collect()
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn crossing(p1: Point, p2: Point, q1: Point, q2: Point) -> Option<Point> {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if d1 * d2 > 0.0 || d3 * d4 > 0.0 {
        return None;
    }
    // collinear pieces have no single crossing point
    if (d1 == 0.0 && d2 == 0.0) || (d3 == 0.0 && d4 == 0.0) {
        return None;
    }
    let denom = d1 - d2;
    if denom == 0.0 {
        return None;
    }
    let t = d1 / denom;
    Some(Point::new(p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y)))
}

struct Candidate {
    kind: ShapePointKind,
    at: Point,
}

pub fn brute_force_census(glyph: &Glyph, cfg: &PipelineConfig) -> ShapePointCensus {
    let delta = cfg.delta_id;
    let mut all: Vec<Trace> = glyph
        .strokes()
        .iter()
        .map(|s| Trace {
            id: s.id().0,
            pts: s.points().collect(),
        })
        .collect();
    all.sort_by_key(|t| t.id);
    let (dots, traces): (Vec<Trace>, Vec<Trace>) = all
        .into_iter()
        .partition(|t| t.pts.len() < 2 || length(&t.pts) < cfg.delta_dot);

    let mut cands: Vec<Candidate> = dots
        .iter()
        .map(|t| Candidate {
            kind: ShapePointKind::D,
            at: t.pts[0],
        })
        .collect();

    let terminals: Vec<(usize, usize)> = (0..traces.len())
        .flat_map(|s| [(s, 0), (s, traces[s].pts.len() - 1)])
        .collect();
    let at = |r: (usize, usize)| traces[r.0].pts[r.1];

    // terminal pairs, closest first
    let mut pairs = Vec::new();
    for a in 0..terminals.len() {
        for b in a + 1..terminals.len() {
            if identified(&traces, terminals[a], terminals[b], delta) {
                pairs.push((dist(at(terminals[a]), at(terminals[b])), a, b));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut paired = vec![false; terminals.len()];
    for (_, a, b) in pairs {
        if !paired[a] && !paired[b] {
            paired[a] = true;
            paired[b] = true;
            cands.push(Candidate {
                kind: ShapePointKind::A,
                at: at(terminals[a]).midpoint(at(terminals[b])),
            });
        }
    }
    let mut ends = Vec::new();
    for (i, &t) in terminals.iter().enumerate() {
        if paired[i] {
            continue;
        }
        let mut touched = false;
        'scan: for s in 0..traces.len() {
            for k in 0..traces[s].pts.len() {
                if (s, k) != t && identified(&traces, t, (s, k), delta) {
                    touched = true;
                    break 'scan;
                }
            }
        }
        let kind = if touched { ShapePointKind::T } else { ShapePointKind::E };
        let c = Candidate { kind, at: at(t) };
        if touched {
            cands.push(c);
        } else {
            ends.push(c);
        }
    }

    let away_from_terminals = |p: Point| terminals.iter().all(|&t| dist(at(t), p) > delta);

    // crossings, segment pairs in lexicographic order
    let mut segs = Vec::new();
    for s in 0..traces.len() {
        for i in 0..traces[s].pts.len() - 1 {
            segs.push((s, i));
        }
    }
    let mut crossings: Vec<Point> = Vec::new();
    for a in 0..segs.len() {
        for b in a + 1..segs.len() {
            let ((sa, ia), (sb, ib)) = (segs[a], segs[b]);
            if sa == sb && ib < ia + 2 {
                continue;
            }
            let (pa, pb) = (&traces[sa].pts, &traces[sb].pts);
            let Some(p) = crossing(pa[ia], pa[ia + 1], pb[ib], pb[ib + 1]) else {
                continue;
            };
            if away_from_terminals(p) && crossings.iter().all(|&q| dist(p, q) > delta) {
                crossings.push(p);
            }
        }
    }
    cands.extend(crossings.into_iter().map(|at| Candidate {
        kind: ShapePointKind::X,
        at,
    }));

    for t in &traces {
        for i in cusps(&t.pts, cfg) {
            if away_from_terminals(t.pts[i]) {
                cands.push(Candidate {
                    kind: ShapePointKind::C,
                    at: t.pts[i],
                });
            }
        }
    }
    for t in &traces {
        for i in bumps(&t.pts, cfg) {
            if away_from_terminals(t.pts[i]) {
                cands.push(Candidate {
                    kind: ShapePointKind::B,
                    at: t.pts[i],
                });
            }
        }
    }
    cands.extend(ends);

    let rank = |k: ShapePointKind| {
        use ShapePointKind::*;
        [D, A, T, X, C, B, E].iter().position(|&q| q == k).unwrap()
    };
    let mut census = ShapePointCensus::new();
    let mut kept: Vec<&Candidate> = Vec::new();
    for c in &cands {
        let beaten = kept
            .iter()
            .any(|k| rank(k.kind) < rank(c.kind) && dist(k.at, c.at) <= delta);
        if !beaten {
            census.add(c.kind, 1);
            kept.push(c);
        }
    }
    census
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Stroke, StrokeId};
    use ShapePointKind::*;

    #[test]
    fn dot_glyph() {
        let g = Glyph::new(vec![Stroke::from_points(StrokeId(0), &[(0.1, 0.1)]).unwrap()], None).unwrap();
        assert_eq!(brute_force_census(&g, &PipelineConfig::default()), ShapePointCensus::from_pairs(&[(D, 1)]));
    }

    #[test]
    fn plus_sign() {
        let h: Vec<_> = (0..64).map(|i| (i as f64 / 63.0, 0.5)).collect();
        let v: Vec<_> = (0..64).map(|i| (0.5, i as f64 / 63.0)).collect();
        let g = Glyph::new(
            vec![
                Stroke::from_points(StrokeId(0), &h).unwrap(),
                Stroke::from_points(StrokeId(1), &v).unwrap(),
            ],
            None,
        )
        .unwrap();
        assert_eq!(
            brute_force_census(&g, &PipelineConfig::default()),
            ShapePointCensus::from_pairs(&[(E, 4), (X, 1)])
        );
    }

    #[test]
    fn sign_changes_skip_zeros() {
        assert_eq!(sign_changes(&[1.0, 0.0, 0.0, -1.0], 1e-12), vec![1]);
        assert_eq!(sign_changes(&[1.0, 0.5, 0.2], 1e-12), Vec::<usize>::new());
    }
}
