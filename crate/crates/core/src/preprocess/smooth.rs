use crate::model::{PipelineConfig, Point, Stroke};

/// Continuous Gaussian ordinate on the 1-based window axis, before any
/// renormalization.
pub fn raw_kernel_value(u: f64, sigma_s: f64, mu: f64) -> f64 {
    let z = (u - mu) / sigma_s;
    (-0.5 * z * z).exp() / ((2.0 * std::f64::consts::PI).sqrt() * sigma_s)
}

/// Discrete smoothing kernel as `(sample offset, weight)` pairs with weights
/// summing to one.
///
/// Window positions `u = 1..=kernel_window` map to sample offsets around the
/// window centre. `max_half_width` truncates the window for short strokes.
pub fn kernel(cfg: &PipelineConfig, max_half_width: usize) -> Vec<(isize, f64)> {
    let half = (cfg.kernel_window / 2).min(max_half_width) as isize;
    let centre = (cfg.kernel_window / 2 + 1) as isize;
    let mut taps: Vec<(isize, f64)> = (1..=cfg.kernel_window as isize)
        .map(|u| (u - centre, raw_kernel_value(u as f64, cfg.sigma_s, cfg.mu)))
        .filter(|(k, _)| k.abs() <= half)
        .collect();
    let total: f64 = taps.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut taps {
        *w /= total;
    }
    taps
}

/// Convolves X(t) and Y(t) with the unit-sum Gaussian kernel, replicating the
/// edge samples beyond either end.
pub fn smooth_stroke(stroke: &Stroke, cfg: &PipelineConfig) -> Stroke {
    let n = stroke.len();
    if n < 2 {
        return stroke.clone();
    }
    let taps = kernel(cfg, (n - 1) / 2);
    let pts: Vec<Point> = stroke.points().collect();
    let last = (n - 1) as isize;
    stroke.map_points(|i, _| {
        let (mut x, mut y) = (0.0, 0.0);
        for &(k, w) in &taps {
            let p = pts[(i as isize + k).clamp(0, last) as usize];
            x += w * p.x;
            y += w * p.y;
        }
        Point::new(x, y)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StrokeId;

    #[test]
    fn raw_kernel_peak_matches_closed_form() {
        let peak = raw_kernel_value(11.0, 3.0, 11.0);
        let expected = 1.0 / (3.0 * (2.0 * std::f64::consts::PI).sqrt());
        assert!((peak - expected).abs() < 1e-15);
        assert!((peak - 0.13298).abs() < 1e-5);
    }

    #[test]
    fn default_kernel_spans_window_and_sums_to_one() {
        let taps = kernel(&PipelineConfig::default(), usize::MAX);
        assert_eq!(taps.len(), 21);
        assert_eq!(taps[0].0, -10);
        assert_eq!(taps[20].0, 10);
        let sum: f64 = taps.iter().map(|t| t.1).sum();
        assert!((sum - 1.0).abs() < 1e-15);
        // symmetric about the centre
        for k in 0..10 {
            assert_eq!(taps[k].1, taps[20 - k].1);
        }
    }

    #[test]
    fn constant_stroke_is_unchanged() {
        let s = Stroke::from_points(StrokeId(0), &[(2.5, -1.0); 30]).unwrap();
        let out = smooth_stroke(&s, &PipelineConfig::default());
        for p in out.points() {
            assert!((p.x - 2.5).abs() < 1e-12 && (p.y + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn affine_sequence_is_preserved_away_from_edges() {
        let pts: Vec<(f64, f64)> = (0..60).map(|t| (0.0, t as f64)).collect();
        let s = Stroke::from_points(StrokeId(0), &pts).unwrap();
        let out = smooth_stroke(&s, &PipelineConfig::default());
        for i in 10..50 {
            assert!((out.point(i).y - i as f64).abs() < 1e-9, "sample {i}");
        }
        assert_eq!(out.len(), 60);
    }

    #[test]
    fn short_strokes_use_truncated_kernel() {
        let s = Stroke::from_points(StrokeId(0), &[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        // two samples: half-width 0, identity
        assert_eq!(smooth_stroke(&s, &PipelineConfig::default()), s);
        let s = Stroke::from_points(StrokeId(0), &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        let out = smooth_stroke(&s, &PipelineConfig::default());
        assert!((out.point(1).x - 1.0).abs() < 1e-12);
        assert!(out.point(0).x > 0.0 && out.point(2).x < 2.0);
    }
}
