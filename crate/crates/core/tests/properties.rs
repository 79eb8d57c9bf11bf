use proptest::prelude::*;

use strokecx::ingest::count_unicodes;
use strokecx::metrics::{curvelength, net_shape_complexity, C3Kinds, ComplexityVariant};
use strokecx::preprocess::{
    normalize_glyph, prepare_glyph, resample_stroke, segment_characters, smooth_stroke, SegmentationParams,
};
use strokecx::shapepoints::{classify_glyph, detect_angle_points, detect_end_points, detect_t_points, is_dot};
use strokecx::synth::random_glyph;
use strokecx::{Glyph, PipelineConfig, ShapePointCensus, ShapePointKind, Stroke, StrokeId, WordRecord};

fn census() -> impl Strategy<Value = ShapePointCensus> {
    proptest::collection::vec(0u32..40, 7).prop_map(|v| {
        let mut c = ShapePointCensus::new();
        for (k, n) in ShapePointKind::COUNTED.into_iter().zip(v) {
            c.add(k, n);
        }
        c
    })
}

fn points(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), min..max)
}

fn variants() -> [ComplexityVariant; 4] {
    [
        ComplexityVariant::c1(),
        ComplexityVariant::c2(),
        ComplexityVariant::c3(C3Kinds::Ctda),
        ComplexityVariant::c3(C3Kinds::Ctd),
    ]
}

proptest! {
    #[test]
    fn adding_a_point_moves_only_variants_that_count_it(c in census(), k in 0usize..7) {
        let kind = ShapePointKind::COUNTED[k];
        let mut more = c;
        more.add(kind, 1);
        for v in variants() {
            let (a, b) = (net_shape_complexity(&c, &v), net_shape_complexity(&more, &v));
            if v.included_kinds.contains(&kind) {
                prop_assert_eq!(b, a + 1 + kind.codimension() as u64);
            } else {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn variants_nest(c in census()) {
        let [c1, c2, c3, c3s] = variants().map(|v| net_shape_complexity(&c, &v));
        prop_assert!(c3s <= c3 && c3 <= c2 && c2 <= c1);
    }

    #[test]
    fn unicode_count_ignores_whitespace_and_joiners(s in "\\PC{0,20}") {
        let n = count_unicodes(&s);
        prop_assert!(n <= s.chars().count());
        let padded = format!(" \u{200D}{s}\u{200C}\t");
        prop_assert_eq!(count_unicodes(&padded), n);
        prop_assert_eq!(count_unicodes(&format!("{s}{s}")), 2 * n);
    }

    #[test]
    fn smoothing_stays_in_the_bounding_box(pts in points(1, 60)) {
        let s = Stroke::from_points(StrokeId(0), &pts).unwrap();
        let out = smooth_stroke(&s, &PipelineConfig::default());
        let ((x0, x1), (y0, y1)) = (s.x_range(), s.y_range());
        prop_assert_eq!(out.len(), s.len());
        for p in out.points() {
            prop_assert!(p.x >= x0 - 1e-9 && p.x <= x1 + 1e-9);
            prop_assert!(p.y >= y0 - 1e-9 && p.y <= y1 + 1e-9);
        }
    }

    #[test]
    fn resampled_circle_points_stay_on_the_circle(n in 8usize..300, r in 0.1f64..5.0, start in 0.0f64..6.3) {
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let a = start + std::f64::consts::TAU * i as f64 / (n - 1) as f64;
                (r * a.cos(), r * a.sin())
            })
            .collect();
        let out = resample_stroke(&Stroke::from_points(StrokeId(0), &pts).unwrap(), 64);
        prop_assert_eq!(out.len(), 64);
        // chords sag by at most r (1 - cos(pi / (n - 1)))
        let sag = r * (1.0 - (std::f64::consts::PI / (n - 1) as f64).cos());
        for p in out.points() {
            let d = (p.x * p.x + p.y * p.y).sqrt();
            prop_assert!(d <= r + 1e-9 && d >= r - sag - 1e-9);
        }
    }

    #[test]
    fn curvelength_is_rigid_and_scales(pts in points(2, 40), angle in 0.0f64..6.3, dx in -5.0f64..5.0, k in 0.1f64..4.0) {
        let g = Glyph::new(vec![Stroke::from_points(StrokeId(0), &pts).unwrap()], None).unwrap();
        let (c, s) = (angle.cos(), angle.sin());
        let moved: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (c * x - s * y + dx, s * x + c * y)).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (k * x, k * y)).collect();
        let l = curvelength(&g);
        let lm = curvelength(&Glyph::new(vec![Stroke::from_points(StrokeId(0), &moved).unwrap()], None).unwrap());
        let ls = curvelength(&Glyph::new(vec![Stroke::from_points(StrokeId(0), &scaled).unwrap()], None).unwrap());
        prop_assert!((l - lm).abs() <= 1e-9 * (1.0 + l));
        prop_assert!((ls - k * l).abs() <= 1e-9 * (1.0 + ls));
    }

    #[test]
    fn normalization_is_idempotent(a in points(2, 30), b in points(1, 30)) {
        let g = Glyph::new(
            vec![Stroke::from_points(StrokeId(0), &a).unwrap(), Stroke::from_points(StrokeId(1), &b).unwrap()],
            None,
        )
        .unwrap();
        if let Ok(once) = normalize_glyph(&g) {
            let twice = normalize_glyph(&once).unwrap();
            for (s1, s2) in once.strokes().iter().zip(twice.strokes()) {
                for (p, q) in s1.points().zip(s2.points()) {
                    prop_assert!((p.x - q.x).abs() < 1e-9 && (p.y - q.y).abs() < 1e-9);
                }
            }
            prop_assert!((once.main_stroke().y_span() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn segmentation_partitions_the_strokes(strokes in proptest::collection::vec(points(1, 8), 1..8)) {
        let strokes: Vec<Stroke> = strokes
            .iter()
            .enumerate()
            .map(|(i, p)| Stroke::from_points(StrokeId(i as u32), p).unwrap())
            .collect();
        let n = strokes.len();
        let word = WordRecord::new("s", "w", strokes);
        let glyphs = segment_characters(&word, &SegmentationParams::default());
        let mut ids: Vec<u32> = glyphs.iter().flat_map(|g| g.strokes().iter().map(|s| s.id().0)).collect();
        ids.sort();
        prop_assert_eq!(ids, (0..n as u32).collect::<Vec<_>>());
    }
}

#[test]
fn terminals_are_conserved_on_random_glyphs() {
    let cfg = PipelineConfig::default();
    for seed in 0..300 {
        let g = prepare_glyph(&random_glyph(seed), &cfg);
        let open = g.strokes().iter().filter(|s| !is_dot(s, &cfg)).count();
        let (e, t, a) = (
            detect_end_points(&g, &cfg).len(),
            detect_t_points(&g, &cfg).len(),
            detect_angle_points(&g, &cfg).len(),
        );
        assert_eq!(e + t + 2 * a, 2 * open, "seed {seed}");
        // arbitration can only absorb terminals (into dots, or a third
        // terminal meeting an Angle), never create them
        let c = classify_glyph(&g, &cfg).1;
        let kept = (c.get(ShapePointKind::E) + c.get(ShapePointKind::T) + 2 * c.get(ShapePointKind::A)) as usize;
        assert!(kept <= 2 * open, "seed {seed}");
    }
}

#[test]
fn classification_is_deterministic() {
    let cfg = PipelineConfig::default();
    for seed in 0..50 {
        let g = prepare_glyph(&random_glyph(seed), &cfg);
        assert_eq!(classify_glyph(&g, &cfg), classify_glyph(&g, &cfg));
        assert_eq!(prepare_glyph(&random_glyph(seed), &cfg), g);
    }
}
