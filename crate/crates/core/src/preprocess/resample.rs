use crate::model::{Point, Stroke};

/// Linear interpolation to `n` points equally spaced along the polyline's
/// arc length. Endpoints are copied exactly; a zero-length stroke repeats
/// its position `n` times.
pub fn resample_stroke(stroke: &Stroke, n: usize) -> Stroke {
    assert!(n >= 2, "resample count must be at least 2");
    let pts: Vec<Point> = stroke.points().collect();
    let mut cumulative = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    cumulative.push(0.0);
    for w in pts.windows(2) {
        acc += w[0].distance(w[1]);
        cumulative.push(acc);
    }
    let total = acc;
    if total == 0.0 {
        return stroke.with_positions(vec![pts[0]; n]);
    }

    let mut out = Vec::with_capacity(n);
    out.push(pts[0]);
    let mut seg = 0;
    for j in 1..n - 1 {
        let target = total * j as f64 / (n - 1) as f64;
        while seg + 1 < pts.len() - 1 && cumulative[seg + 1] < target {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let f = if len > 0.0 {
            ((target - cumulative[seg]) / len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (a, b) = (pts[seg], pts[seg + 1]);
        out.push(Point::new(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)));
    }
    out.push(pts[pts.len() - 1]);
    stroke.with_positions(out)
}
