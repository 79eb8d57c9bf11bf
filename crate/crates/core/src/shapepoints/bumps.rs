use crate::model::{PipelineConfig, SampleRef, ShapePoint, ShapePointKind, Stroke};

use super::derivative::DerivativeSeries;

/// Values below this fraction of the mean speed count as exactly zero when
/// reading derivative signs, so rounding noise on straight runs never
/// produces a crossing.
pub(crate) const SIGN_FLOOR: f64 = 1e-9;

/// Interior samples where X′ or Y′ changes sign while the other derivative
/// stays clear of zero. Crossings within two samples of each other merge.
pub fn detect_bump_points(stroke: &Stroke, d: &DerivativeSeries, cfg: &PipelineConfig) -> Vec<ShapePoint> {
    bump_indices(d, cfg)
        .into_iter()
        .map(|i| ShapePoint::new(ShapePointKind::B, stroke.point(i), vec![SampleRef::new(stroke.id(), i)]))
        .collect()
}

pub(crate) fn bump_indices(d: &DerivativeSeries, cfg: &PipelineConfig) -> Vec<usize> {
    let n = d.len();
    let mean = d.mean_speed();
    let floor = SIGN_FLOOR * mean;
    let eps = cfg.eps_deriv * mean;

    let mut hits: Vec<usize> = zero_crossings(&d.dx, floor)
        .into_iter()
        .filter(|&k| d.dy[k].abs() > eps)
        .chain(zero_crossings(&d.dy, floor).into_iter().filter(|&k| d.dx[k].abs() > eps))
        .filter(|&k| k >= 1 && k + 1 < n)
        .collect();
    hits.sort_unstable();
    hits.dedup();

    let mut merged: Vec<usize> = Vec::new();
    let mut last = None;
    for k in hits {
        match last {
            Some(prev) if k - prev <= 2 => {}
            _ => merged.push(k),
        }
        last = Some(k);
    }
    merged
}

/// For every pair of consecutive significant values with opposite signs,
/// the index of smallest magnitude between them (lowest index on ties).
fn zero_crossings(v: &[f64], floor: f64) -> Vec<usize> {
    let significant: Vec<usize> = (0..v.len()).filter(|&i| v[i].abs() > floor).collect();
    significant
        .windows(2)
        .filter(|w| v[w[0]].signum() != v[w[1]].signum())
        .map(|w| {
            (w[0]..=w[1])
                .min_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(a.cmp(&b)))
                .expect("non-empty range")
        })
        .collect()
}
