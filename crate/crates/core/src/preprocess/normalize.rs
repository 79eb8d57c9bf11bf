use crate::model::{Glyph, Point};

use super::PreprocessError;

/// Translates the glyph so its bounding box starts at the origin and divides
/// every coordinate by the main stroke's y-span.
pub fn normalize_glyph(glyph: &Glyph) -> Result<Glyph, PreprocessError> {
    let span = glyph.main_stroke().y_span();
    if span > 0.0 {
        Ok(scale_about_origin(glyph, span))
    } else {
        Err(PreprocessError::DegenerateGlyph)
    }
}

/// [`normalize_glyph`] with the fallbacks for flat glyphs: divide by the
/// widest stroke's x-span, or pass an all-dots glyph through untouched.
pub fn normalize_with_fallback(glyph: &Glyph) -> Glyph {
    match normalize_glyph(glyph) {
        Ok(g) => g,
        Err(PreprocessError::DegenerateGlyph) => {
            let width = glyph
                .strokes()
                .iter()
                .map(|s| s.x_span())
                .fold(0.0, f64::max);
            if width > 0.0 {
                scale_about_origin(glyph, width)
            } else {
                glyph.with_strokes(glyph.strokes().to_vec(), 1.0)
            }
        }
    }
}

fn scale_about_origin(glyph: &Glyph, divisor: f64) -> Glyph {
    let (lo, _) = glyph.bounds();
    let strokes = glyph
        .strokes()
        .iter()
        .map(|s| s.map_points(|_, p| Point::new((p.x - lo.x) / divisor, (p.y - lo.y) / divisor)))
        .collect();
    glyph.with_strokes(strokes, divisor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Stroke, StrokeId};

    fn glyph(strokes: &[&[(f64, f64)]]) -> Glyph {
        let strokes = strokes
            .iter()
            .enumerate()
            .map(|(i, pts)| Stroke::from_points(StrokeId(i as u32), pts).unwrap())
            .collect();
        Glyph::new(strokes, None).unwrap()
    }

    #[test]
    fn divides_by_main_stroke_height() {
        let g = glyph(&[&[(1.0, 3.0), (2.0, 5.0)]]);
        let n = normalize_glyph(&g).unwrap();
        assert_eq!(n.scale_factor(), 2.0);
        assert!((n.main_stroke().y_span() - 1.0).abs() < 1e-9);
        assert_eq!(n.bounds().0, Point::new(0.0, 0.0));
    }

    #[test]
    fn secondary_strokes_share_the_factor() {
        let g = glyph(&[&[(0.0, 0.0), (0.0, 2.0)], &[(1.0, 0.0), (1.5, 1.0)]]);
        let n = normalize_glyph(&g).unwrap();
        assert_eq!(n.main_stroke_id(), StrokeId(0));
        assert!((n.strokes()[1].y_span() - 0.5).abs() < 1e-12);
        // aspect ratio of the secondary stroke is untouched
        let s = &n.strokes()[1];
        assert!((s.x_span() / s.y_span() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_point_passes_through() {
        let g = glyph(&[&[(4.0, 7.0)]]);
        assert_eq!(normalize_glyph(&g), Err(PreprocessError::DegenerateGlyph));
        let n = normalize_with_fallback(&g);
        assert_eq!(n.scale_factor(), 1.0);
        assert_eq!(n.strokes(), g.strokes());
    }

    #[test]
    fn flat_glyph_falls_back_to_width() {
        let g = glyph(&[&[(2.0, 1.0), (6.0, 1.0)], &[(3.0, 1.0), (4.0, 1.0)]]);
        let n = normalize_with_fallback(&g);
        assert_eq!(n.scale_factor(), 4.0);
        assert!((n.strokes()[0].x_span() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_is_idempotent() {
        let g = glyph(&[&[(3.0, -2.0), (5.0, 4.0), (9.0, 1.0)], &[(2.0, 0.0), (8.0, 3.0)]]);
        let once = normalize_glyph(&g).unwrap();
        let twice = normalize_glyph(&once).unwrap();
        for (a, b) in once.strokes().iter().zip(twice.strokes()) {
            for (p, q) in a.points().zip(b.points()) {
                assert!(p.distance(q) < 1e-9);
            }
        }
    }
}
