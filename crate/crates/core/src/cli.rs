//! Command-line front end: `analyze`, `compare`, `annotate` and `verify`.
//!
//! Exit status: 0 success, 1 I/O, parse or usage failure, 2 dataset
//! validation failure (outputs for the good records are still written),
//! 3 verification failure.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::ingest::{read_dataset, validate_dataset, Dataset, IngestError, Violation};
use crate::metrics::{compute_row, summarize_script, C3Kinds, MetricsError, MetricsRow, ScriptSummary};
use crate::model::{PipelineConfig, WordRecord};
use crate::preprocess::{preprocess_word, SegmentationParams};
use crate::report::{
    comparison_tables, emit_summary, metrics_table, render_annotated_glyph, summary_table, SummaryFormat,
};
use crate::shapepoints::classify_glyph;
use crate::synth::{survival_table, verify_suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "strokecx", version, about = "Shape-point analysis of handwritten strokes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-word metrics and per-script summary for one dataset.
    Analyze {
        input: PathBuf,
        /// Also render every glyph to SVG under the output directory.
        #[arg(long)]
        annotate: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Comparison tables across the scripts of one or more datasets.
    Compare {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// `analyze --annotate`.
    Annotate {
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Synthetic ground truths, oracle equivalence and perturbation study.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with [pipeline] and [segmentation] tables, c3_kinds, seed, trials.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "strokecx-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub resample: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long = "delta-id")]
    pub delta_id: Option<f64>,
    #[arg(long = "c3-kinds")]
    pub c3_kinds: Option<C3Kinds>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

/// Everything a run is parameterized by, after defaults, the config file
/// and command-line overrides are applied in that order.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub pipeline: PipelineConfig,
    pub segmentation: SegmentationParams,
    pub c3_kinds: C3Kinds,
    pub seed: u64,
    pub trials: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            segmentation: SegmentationParams::default(),
            c3_kinds: C3Kinds::default(),
            seed: 0,
            trials: 1000,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read config {path}: {message}")]
    Config { path: String, message: String },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl Settings {
    pub fn load(common: &CommonArgs) -> Result<Self, CliError> {
        let mut s = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Config {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                toml::from_str(&text).map_err(|e| CliError::Config {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?
            }
            None => Settings::default(),
        };
        if let Some(n) = common.resample {
            s.pipeline.resample_n = n;
        }
        if let Some(v) = common.sigma {
            s.pipeline.sigma_s = v;
        }
        if let Some(v) = common.delta_id {
            s.pipeline.delta_id = v;
        }
        if let Some(k) = common.c3_kinds {
            s.c3_kinds = k;
        }
        if let Some(v) = common.seed {
            s.seed = v;
        }
        Ok(s)
    }

    fn validated(self) -> Result<Self, CliError> {
        self.pipeline
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid pipeline config: {e}")))?;
        self.segmentation
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid segmentation config: {e}")))?;
        Ok(self)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Analyze {
            input,
            annotate,
            common,
        } => run_analyze(&input, annotate, &common),
        Command::Annotate { input, common } => run_analyze(&input, true, &common),
        Command::Compare { inputs, common } => run_compare(&inputs, &common),
        Command::Verify { common } => run_verify(&common),
    }
}

fn check_readable(paths: &[&Path]) -> Result<(), CliError> {
    for p in paths {
        if !p.is_file() {
            return Err(CliError::Usage(format!("cannot read input {}", p.display())));
        }
    }
    Ok(())
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(err)?;
    }
    fs::write(path, bytes).map_err(err)
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

/// A record that passed validation, with its position in the input.
struct Analyzed {
    index: usize,
    word: WordRecord,
    row: MetricsRow,
}

fn analyze_records(records: &[(usize, &WordRecord)], s: &Settings, jobs: usize) -> Result<Vec<Analyzed>, CliError> {
    let mut done: Vec<Analyzed> = pool(jobs).install(|| {
        records
            .par_iter()
            .map(|&(index, w)| {
                let word = preprocess_word(w, &s.segmentation, &s.pipeline);
                let row = compute_row(&word, &s.pipeline, s.c3_kinds)?;
                Ok(Analyzed { index, word, row })
            })
            .collect::<Result<Vec<_>, MetricsError>>()
    })?;
    done.sort_by(|a, b| {
        (a.row.script.as_str(), a.row.word.as_str(), a.index).cmp(&(b.row.script.as_str(), b.row.word.as_str(), b.index))
    });
    Ok(done)
}

fn summaries(done: &[Analyzed], c3: C3Kinds) -> Result<Vec<ScriptSummary>, CliError> {
    let mut by_script: BTreeMap<&str, Vec<MetricsRow>> = BTreeMap::new();
    for a in done {
        by_script.entry(&a.row.script).or_default().push(a.row.clone());
    }
    by_script
        .values()
        .map(|rows| summarize_script(rows, c3).map_err(CliError::from))
        .collect()
}

fn violations_table(datasets: &[(usize, &Dataset, Vec<Violation>)]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["source", "record", "script", "transcription", "message"])
        .expect("in-memory write");
    for (_, d, vs) in datasets {
        for v in vs {
            let r = &d.records[v.record];
            w.write_record([
                d.source_path.as_str(),
                &v.record.to_string(),
                r.script.as_str(),
                r.transcription.as_str(),
                v.message.as_str(),
            ])
            .expect("in-memory write");
        }
    }
    w.into_inner().expect("in-memory flush")
}

fn path_component(s: &str) -> String {
    let cleaned: String = s
        .chars()
        .map(|c| if matches!(c, '/' | '\\' | '\0') || c.is_control() { '_' } else { c })
        .collect();
    match cleaned.as_str() {
        "" | "." | ".." => format!("_{cleaned}"),
        _ => cleaned,
    }
}

fn write_annotations(done: &[Analyzed], s: &Settings, out: &Path) -> Result<usize, CliError> {
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut files = 0;
    for a in done {
        let script = path_component(&a.row.script);
        let mut word = path_component(&a.row.word);
        if !seen.insert((script.clone(), word.clone())) {
            word = format!("{word}~{}", a.index);
        }
        for (i, g) in a.word.glyphs.as_deref().unwrap_or_default().iter().enumerate() {
            let (points, _) = classify_glyph(g, &s.pipeline);
            write(
                &out.join(&script).join(&word).join(format!("{i}.svg")),
                &render_annotated_glyph(g, &points),
            )?;
            files += 1;
        }
    }
    Ok(files)
}

pub fn run_analyze(input: &Path, annotate: bool, common: &CommonArgs) -> Result<i32, CliError> {
    check_readable(&[input])?;
    let s = Settings::load(common)?.validated()?;
    let dataset = read_dataset(input)?;
    let report = validate_dataset(&dataset);
    let bad = report.bad_records();
    let good: Vec<(usize, &WordRecord)> = dataset
        .records
        .iter()
        .enumerate()
        .filter(|(i, _)| !bad.contains(i))
        .collect();

    let done = analyze_records(&good, &s, common.jobs)?;
    let rows: Vec<MetricsRow> = done.iter().map(|a| a.row.clone()).collect();
    let out = &common.out;
    write(&out.join("metrics.csv"), &metrics_table(&rows))?;
    write(&out.join("summary.csv"), &summary_table(&summaries(&done, s.c3_kinds)?))?;
    write(
        &out.join("violations.csv"),
        &violations_table(&[(0, &dataset, report.violations.clone())]),
    )?;
    if annotate {
        let n = write_annotations(&done, &s, out)?;
        eprintln!("rendered {n} glyphs");
    }
    eprintln!("{} words analyzed, {} rejected; output in {}", rows.len(), bad.len(), out.display());
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_INVALID })
}

pub fn run_compare(inputs: &[PathBuf], common: &CommonArgs) -> Result<i32, CliError> {
    check_readable(&inputs.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
    let s = Settings::load(common)?.validated()?;
    let datasets: Vec<Dataset> = inputs.iter().map(|p| read_dataset(p)).collect::<Result<_, _>>()?;
    let checked: Vec<(usize, &Dataset, Vec<Violation>)> = datasets
        .iter()
        .enumerate()
        .map(|(k, d)| (k, d, validate_dataset(d).violations))
        .collect();

    // indices run across all inputs so they stay unique
    let mut good: Vec<(usize, &WordRecord)> = Vec::new();
    let mut offset = 0;
    for (_, d, vs) in &checked {
        let bad: BTreeSet<usize> = vs.iter().map(|v| v.record).collect();
        good.extend(
            d.records
                .iter()
                .enumerate()
                .filter(|(i, _)| !bad.contains(i))
                .map(|(i, r)| (offset + i, r)),
        );
        offset += d.records.len();
    }
    let done = analyze_records(&good, &s, common.jobs)?;
    let sums = summaries(&done, s.c3_kinds)?;
    if sums.len() < 2 {
        return Err(CliError::Usage(format!(
            "compare needs at least two scripts, found {}",
            sums.len()
        )));
    }
    let tables = comparison_tables(&sums);
    let out = &common.out;
    write(&out.join("comparison.csv"), &emit_summary(&tables, SummaryFormat::DelimitedTable))?;
    write(&out.join("comparison.json"), &emit_summary(&tables, SummaryFormat::StructuredText))?;
    write(&out.join("summary.csv"), &summary_table(&sums))?;
    write(&out.join("violations.csv"), &violations_table(&checked))?;
    eprintln!("{} scripts compared; output in {}", sums.len(), out.display());
    let clean = checked.iter().all(|(_, _, vs)| vs.is_empty());
    Ok(if clean { EXIT_OK } else { EXIT_INVALID })
}

/// Runs without validating the pipeline config, so degenerate settings
/// can be probed; they show up as failed checks.
pub fn run_verify(common: &CommonArgs) -> Result<i32, CliError> {
    let s = Settings::load(common)?;
    let outcome = pool(common.jobs).install(|| verify_suite(&s.pipeline, s.seed, s.trials));
    write(&common.out.join("survival.csv"), &survival_table(&outcome.study))?;
    for f in &outcome.failures {
        eprintln!("FAIL {}: {}", f.check, f.detail);
    }
    if outcome.failures.is_empty() {
        eprintln!("verify: all checks passed");
        Ok(EXIT_OK)
    } else {
        eprintln!("verify: {} check(s) failed", outcome.failures.len());
        Ok(EXIT_VERIFY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        fs::write(
            &path,
            "c3_kinds = \"ctd\"\nseed = 9\n[pipeline]\nresample_n = 32\ndelta_id = 0.04\n[segmentation]\ngap_threshold = 2.0\n",
        )
        .unwrap();
        let common = CommonArgs {
            config: Some(path),
            delta_id: Some(0.03),
            ..CommonArgs::default()
        };
        let s = Settings::load(&common).unwrap();
        assert_eq!(s.pipeline.resample_n, 32);
        assert_eq!(s.pipeline.delta_id, 0.03);
        assert_eq!(s.segmentation.gap_threshold, 2.0);
        assert_eq!(s.c3_kinds, C3Kinds::Ctd);
        assert_eq!(s.seed, 9);
        assert_eq!(s.pipeline.sigma_s, PipelineConfig::default().sigma_s);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        fs::write(&path, "[pipeline]\nsigma = 2.0\n").unwrap();
        let common = CommonArgs {
            config: Some(path),
            ..CommonArgs::default()
        };
        assert!(matches!(Settings::load(&common), Err(CliError::Config { .. })));
    }

    #[test]
    fn path_components_are_sanitized() {
        assert_eq!(path_component("a/b"), "a_b");
        assert_eq!(path_component(".."), "_..");
        assert_eq!(path_component("தமிழ்"), "தமிழ்");
    }

    #[test]
    fn bad_arguments_exit_one() {
        assert_eq!(run(["strokecx", "frobnicate"]), EXIT_FAILURE);
        assert_eq!(run(["strokecx", "analyze", "/nonexistent/file.json"]), EXIT_FAILURE);
    }
}
