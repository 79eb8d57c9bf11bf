use crate::model::{PipelineConfig, SampleRef, ShapePoint, ShapePointKind, Stroke};

use super::derivative::DerivativeSeries;

/// Interior samples where the speed |(X′, Y′)| has a local minimum and the
/// tangent turns by more than `theta_cusp` from sample i−1 to sample i+1.
/// At most one cusp per speed minimum.
///
/// Measuring across the window rather than at the vertex matters after
/// resampling: when the apex falls between two samples the turn is split
/// over two vertices, neither of which turns sharply on its own.
pub fn detect_cusp_points(stroke: &Stroke, d: &DerivativeSeries, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    cusp_indices(stroke, d, cfg)
        .into_iter()
        .map(|i| ShapePoint::new(ShapePointKind::C, stroke.point(i), vec![SampleRef::new(stroke.id(), i)]))
        .collect()
}

/// Angle in degrees between two tangent vectors; zero when either vanishes.
pub fn turn_angle((ux, uy): (f64, f64), (vx, vy): (f64, f64)) -> f64 {
    let nu = (ux * ux + uy * uy).sqrt();
    let nv = (vx * vx + vy * vy).sqrt();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    ((ux * vx + uy * vy) / (nu * nv)).clamp(-1.0, 1.0).acos().to_degrees()
}

pub(crate) fn cusp_indices(stroke: &Stroke, d: &DerivativeSeries, cfg: &PipelineConfig) -> Vec<usize> {
    let n = stroke.len();
    if n < 3 {
        return Vec::new();
    }
    let speed: Vec<f64> = (0..n).map(|i| d.speed(i)).collect();
    let candidates: Vec<(usize, f64)> = (1..n - 1)
        .filter(|&i| speed[i] <= speed[i - 1] && speed[i] <= speed[i + 1])
        .map(|i| (i, turn_angle((d.dx[i - 1], d.dy[i - 1]), (d.dx[i + 1], d.dy[i + 1]))))
        .filter(|&(_, turn)| turn > cfg.theta_cusp)
        .collect();

    // a flat speed minimum can qualify at neighbouring samples; keep the
    // sharpest turn of each run
    let mut out: Vec<(usize, f64)> = Vec::new();
    for (i, turn) in candidates {
        match out.last_mut() {
            Some(last) if i - last.0 <= 2 => {
                if turn > last.1 {
                    *last = (i, turn);
                }
            }
            _ => out.push((i, turn)),
        }
    }
    out.into_iter().map(|(i, _)| i).collect()
}
