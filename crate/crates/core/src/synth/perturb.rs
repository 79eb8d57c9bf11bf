use std::f64::consts::TAU;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Glyph, Point};

const WAVES: usize = 3;

/// Seed for trial `k` of a study seeded with `seed`: the first word of
/// ChaCha8 stream `k` under `seed`.
pub fn trial_seed(seed: u64, k: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng.next_u64()
}

struct Wave {
    amplitude: f64,
    frequency: f64,
    phase: f64,
}

fn waves(rng: &mut ChaCha8Rng, magnitude: f64) -> [Wave; WAVES] {
    std::array::from_fn(|_| Wave {
        amplitude: magnitude / WAVES as f64,
        frequency: rng.gen_range(0.5..2.0),
        phase: rng.gen_range(0.0..TAU),
    })
}

fn displacement(ws: &[Wave; WAVES], u: f64) -> f64 {
    ws.iter().map(|w| w.amplitude * (TAU * w.frequency * u + w.phase).sin()).sum()
}

/// Smooth seeded displacement of every sample.
///
/// Each stroke gets its own draw (ChaCha8 stream = stroke id) of three
/// sinusoids per coordinate in the normalized sample position u in [0, 1],
/// with non-integer frequencies so a closed stroke does not stay closed.
/// Each coordinate moves by at most `magnitude`.
pub fn perturb(glyph: &Glyph, magnitude: f64, seed: u64) -> Glyph {
    assert!(magnitude >= 0.0, "perturbation magnitude must be non-negative");
    if magnitude == 0.0 {
        return glyph.clone();
    }
    let strokes = glyph
        .strokes()
        .iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s.id().0 as u64);
            let wx = waves(&mut rng, magnitude);
            let wy = waves(&mut rng, magnitude);
            let last = (s.len() - 1).max(1) as f64;
            s.map_points(|i, p| {
                let u = i as f64 / last;
                Point::new(p.x + displacement(&wx, u), p.y + displacement(&wy, u))
            })
        })
        .collect();
    glyph.with_strokes(strokes, glyph.scale_factor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, SyntheticShape, SyntheticSpec};

    fn circle() -> Glyph {
        generate(&SyntheticSpec::new(SyntheticShape::Circle)).unwrap()
    }

    #[test]
    fn zero_magnitude_is_identity() {
        let g = circle();
        assert_eq!(perturb(&g, 0.0, 42), g);
    }

    #[test]
    fn same_seed_same_output() {
        let g = circle();
        assert_eq!(perturb(&g, 0.15, 7), perturb(&g, 0.15, 7));
        assert_ne!(perturb(&g, 0.15, 7), perturb(&g, 0.15, 8));
    }

    #[test]
    fn displacement_is_bounded_per_coordinate() {
        let g = generate(&SyntheticSpec::new(SyntheticShape::TJunction)).unwrap();
        for seed in 0..20 {
            let p = perturb(&g, 0.15, seed);
            for (a, b) in g.strokes().iter().zip(p.strokes()) {
                for (pa, pb) in a.points().zip(b.points()) {
                    assert!((pa.x - pb.x).abs() <= 0.15 + 1e-12);
                    assert!((pa.y - pb.y).abs() <= 0.15 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..100).map(|k| trial_seed(1, k)).collect();
        assert_eq!(seeds.len(), 100);
    }
}
