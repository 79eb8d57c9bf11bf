use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ingest::Dataset;
use crate::model::{Glyph, PipelineConfig, Sample, ShapePointKind, Stroke, StrokeId, WordRecord};
use crate::preprocess::prepare_glyph;
use crate::shapepoints::classify_glyph;

use super::{brute_force_census, generate, perturb, trial_seed, SyntheticShape, SyntheticSpec};

/// Shape used to probe each kind's persistence.
pub const STUDY_CASES: [(SyntheticShape, ShapePointKind); 7] = [
    (SyntheticShape::Line, ShapePointKind::E),
    (SyntheticShape::Arc, ShapePointKind::B),
    (SyntheticShape::Lemniscate, ShapePointKind::X),
    (SyntheticShape::CuspCurve, ShapePointKind::C),
    (SyntheticShape::TJunction, ShapePointKind::T),
    (SyntheticShape::Dot, ShapePointKind::D),
    (SyntheticShape::Corner, ShapePointKind::A),
];

/// A raw glyph of one to three strokes: cubic Béziers, sometimes starting
/// on an earlier stroke, occasionally a dot.
pub fn random_glyph(seed: u64) -> Glyph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=3);
    let mut strokes: Vec<Stroke> = Vec::new();
    for id in 0..count {
        let sid = StrokeId(id as u32);
        if id > 0 && rng.gen_bool(0.1) {
            let p = (rng.gen::<f64>(), rng.gen::<f64>());
            strokes.push(Stroke::from_points(sid, &vec![p; rng.gen_range(1..5)]).expect("dot"));
            continue;
        }
        let mut ctrl: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        if let Some(prev) = strokes.iter().rfind(|s| s.len() > 1) {
            if rng.gen_bool(0.4) {
                let k = if rng.gen_bool(0.5) { rng.gen_range(0..prev.len()) } else { prev.len() - 1 };
                let p = prev.point(k);
                ctrl[0] = (p.x, p.y);
            }
        }
        let n = rng.gen_range(20..=80);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                let s = 1.0 - t;
                let w = [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t];
                let x = (0..4).map(|j| w[j] * ctrl[j].0).sum();
                let y = (0..4).map(|j| w[j] * ctrl[j].1).sum();
                (x, y)
            })
            .collect();
        strokes.push(Stroke::from_points(sid, &pts).expect("finite control points"));
    }
    Glyph::new(strokes, None).expect("at least one stroke")
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub shape: SyntheticShape,
    pub kind: ShapePointKind,
    pub magnitude: f64,
    pub trials: usize,
    pub survived: usize,
}

impl StudyRow {
    pub fn survival_rate(&self) -> f64 {
        self.survived as f64 / self.trials as f64
    }
}

/// For each study case, the share of perturbed trials in which the probed
/// kind is still present at least as often as in the ground truth.
///
/// Trial `k` perturbs with `trial_seed(seed, k)`; trials run in parallel and
/// are counted, so the result does not depend on scheduling.
pub fn perturbation_study(cfg: &PipelineConfig, magnitude: f64, trials: usize, seed: u64) -> Vec<StudyRow> {
    STUDY_CASES
        .iter()
        .map(|&(shape, kind)| {
            let base = generate(&SyntheticSpec::new(shape)).expect("default specs are valid");
            let want = shape.ground_truth().get(kind);
            let survived = (0..trials as u64)
                .into_par_iter()
                .filter(|&k| {
                    let g = prepare_glyph(&perturb(&base, magnitude, trial_seed(seed, k)), cfg);
                    classify_glyph(&g, cfg).1.get(kind) >= want
                })
                .count();
            StudyRow {
                shape,
                kind,
                magnitude,
                trials,
                survived,
            }
        })
        .collect()
}

/// `shape,kind,magnitude,survival_rate` table.
pub fn survival_table(rows: &[StudyRow]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["shape", "kind", "magnitude", "survival_rate"]).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.shape.name().to_string(),
            r.kind.symbol().to_string(),
            // 3 * 0.05 should print as 0.15
            format!("{}", (r.magnitude * 1e12).round() / 1e12),
            format!("{}", r.survival_rate()),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub study: Vec<StudyRow>,
    pub failures: Vec<VerifyFailure>,
}

pub const STABLE_SURVIVAL_MIN: f64 = 0.95;
pub const UNSTABLE_SURVIVAL_MAX: f64 = 0.05;
pub const RANDOM_GLYPHS: u64 = 100;

/// Ground truths, oracle equivalence, and the persistence dichotomy at a
/// perturbation of three identification radii.
pub fn verify_suite(cfg: &PipelineConfig, seed: u64, trials: usize) -> VerifyOutcome {
    let mut failures = Vec::new();
    for shape in SyntheticShape::ALL {
        let g = prepare_glyph(&generate(&SyntheticSpec::new(shape)).expect("default specs are valid"), cfg);
        let got = classify_glyph(&g, cfg).1;
        if got != shape.ground_truth() {
            failures.push(VerifyFailure {
                check: format!("ground_truth/{}", shape.name()),
                detail: format!("expected {}, got {}", shape.ground_truth(), got),
            });
        }
        let oracle = brute_force_census(&g, cfg);
        if oracle != got {
            failures.push(VerifyFailure {
                check: format!("oracle/{}", shape.name()),
                detail: format!("detectors {got}, brute force {oracle}"),
            });
        }
    }
    let mut mismatched: Vec<(u64, String)> = (0..RANDOM_GLYPHS)
        .into_par_iter()
        .filter_map(|k| {
            let s = trial_seed(seed, k);
            let g = prepare_glyph(&random_glyph(s), cfg);
            let (a, b) = (classify_glyph(&g, cfg).1, brute_force_census(&g, cfg));
            (a != b).then(|| (k, format!("seed {s}: detectors {a}, brute force {b}")))
        })
        .collect();
    mismatched.sort();
    failures.extend(mismatched.into_iter().map(|(k, detail)| VerifyFailure {
        check: format!("oracle/random/{k}"),
        detail,
    }));

    let study = perturbation_study(cfg, 3.0 * cfg.delta_id, trials, seed);
    for r in &study {
        let rate = r.survival_rate();
        let ok = if r.kind.is_stable() {
            rate >= STABLE_SURVIVAL_MIN
        } else {
            rate <= UNSTABLE_SURVIVAL_MAX
        };
        if !ok {
            let bound = if r.kind.is_stable() {
                format!(">= {STABLE_SURVIVAL_MIN}")
            } else {
                format!("<= {UNSTABLE_SURVIVAL_MAX}")
            };
            failures.push(VerifyFailure {
                check: format!("stability/{}/{}", r.shape.name(), r.kind.symbol()),
                detail: format!("survival {rate} ({}/{}), want {bound}", r.survived, r.trials),
            });
        }
    }
    VerifyOutcome { study, failures }
}

fn word(script: &str, transcription: &str, shapes: &[SyntheticShape]) -> WordRecord {
    const HEIGHT: f64 = 100.0;
    const GAP: f64 = 80.0;
    let mut strokes = Vec::new();
    let mut cursor = 0.0;
    for (j, &shape) in shapes.iter().enumerate() {
        let spec = SyntheticSpec {
            size: HEIGHT,
            seed: j as u64,
            ..SyntheticSpec::new(shape)
        };
        let g = generate(&spec).expect("valid spec");
        let (lo, hi) = g.bounds();
        for s in g.strokes() {
            let id = StrokeId(strokes.len() as u32);
            let samples: Vec<Sample> = s
                .samples()
                .iter()
                .map(|smp| Sample {
                    x: smp.x - lo.x + cursor,
                    y: smp.y - lo.y,
                    t: smp.t,
                })
                .collect();
            strokes.push(Stroke::new(id, samples).expect("translated stroke"));
        }
        cursor += hi.x - lo.x + GAP;
    }
    WordRecord::new(script, transcription, strokes)
}

/// Five words in two scripts: `steady` is built from lines and arcs only
/// (E and B points), `knotted` from T-junctions and cusps. One letter per
/// glyph.
pub fn demo_dataset() -> Dataset {
    use SyntheticShape::*;
    let records = vec![
        word("steady", "ln", &[Line, Arc]),
        word("steady", "nln", &[Arc, Line, Arc]),
        word("knotted", "tv", &[TJunction, CuspCurve]),
        word("knotted", "vt", &[CuspCurve, TJunction]),
        word("knotted", "tvt", &[TJunction, CuspCurve, TJunction]),
    ];
    Dataset {
        records,
        source_path: String::new(),
        format_version: "1".to_string(),
    }
}
