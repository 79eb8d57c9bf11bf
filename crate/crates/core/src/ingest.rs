//! Reading stroke datasets from disk.
//!
//! Two layouts are accepted. The structured one is JSON:
//!
//! ```json
//! { "format_version": "1",
//!   "records": [ { "script": "hindi", "transcription": "ठाणे",
//!                  "strokes": [ [[x, y], [x, y], ...], ... ],
//!                  "glyphs": [[0, 1], [2]] } ] }
//! ```
//!
//! where a sample may also be `[x, y, t]` and `glyphs` (optional) groups
//! stroke indices into characters. The delimited one is CSV with header
//! `word_id,script,transcription,stroke_id,x,y`, one sample per row, rows
//! grouped by word and then by stroke.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Sample, Stroke, StrokeId, WordRecord};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed dataset: {0}")]
    MalformedFile(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("dataset is not valid UTF-8: {0}")]
    EncodingError(#[from] std::str::Utf8Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    StructuredText,
    DelimitedTable,
}

impl DatasetFormat {
    /// `.csv`/`.tsv` are delimited, anything else is structured text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => DatasetFormat::DelimitedTable,
            _ => DatasetFormat::StructuredText,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<WordRecord>,
    pub source_path: String,
    pub format_version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDataset {
    format_version: String,
    records: Vec<FileRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRecord {
    script: String,
    transcription: String,
    strokes: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    glyphs: Option<Vec<Vec<u32>>>,
}

pub fn read_dataset(path: &Path) -> Result<Dataset, IngestError> {
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&bytes, DatasetFormat::from_path(path), &path.display().to_string())
}

pub fn parse_dataset(bytes: &[u8], format: DatasetFormat, source_path: &str) -> Result<Dataset, IngestError> {
    let text = std::str::from_utf8(bytes)?;
    let (records, format_version) = match format {
        DatasetFormat::StructuredText => parse_structured(text)?,
        DatasetFormat::DelimitedTable => (parse_delimited(text)?, FORMAT_VERSION.to_string()),
    };
    if records.is_empty() {
        return Err(IngestError::InvariantViolation("dataset has no records".into()));
    }
    Ok(Dataset {
        records,
        source_path: source_path.to_string(),
        format_version,
    })
}

fn parse_structured(text: &str) -> Result<(Vec<WordRecord>, String), IngestError> {
    let file: FileDataset =
        serde_json::from_str(text).map_err(|e| IngestError::MalformedFile(e.to_string()))?;
    let mut records = Vec::with_capacity(file.records.len());
    for (r, rec) in file.records.into_iter().enumerate() {
        let mut strokes = Vec::with_capacity(rec.strokes.len());
        for (s, raw) in rec.strokes.into_iter().enumerate() {
            let id = StrokeId(s as u32);
            let mut samples = Vec::with_capacity(raw.len());
            for (i, v) in raw.into_iter().enumerate() {
                let where_ = || format!("record {r}, stroke {s}, sample {i}");
                let (x, y, t) = match *v.as_slice() {
                    [x, y] => (x, y, i as u64),
                    [x, y, t] => {
                        if !(t >= 0.0 && t.fract() == 0.0) {
                            return Err(IngestError::MalformedFile(format!(
                                "{}: t must be a non-negative integer",
                                where_()
                            )));
                        }
                        (x, y, t as u64)
                    }
                    _ => {
                        return Err(IngestError::MalformedFile(format!(
                            "{}: expected [x, y] or [x, y, t]",
                            where_()
                        )))
                    }
                };
                check_finite(x, y, &where_)?;
                samples.push(Sample::new(x, y, t));
            }
            strokes.push(
                Stroke::new(id, samples)
                    .map_err(|e| IngestError::InvariantViolation(format!("record {r}: {e}")))?,
            );
        }
        let mut word = WordRecord::new(rec.script, rec.transcription, strokes);
        word.segmentation = rec
            .glyphs
            .map(|groups| groups.into_iter().map(|g| g.into_iter().map(StrokeId).collect()).collect());
        records.push(word);
    }
    Ok((records, file.format_version))
}

#[derive(Deserialize)]
struct Row {
    word_id: String,
    script: String,
    transcription: String,
    stroke_id: u32,
    x: f64,
    y: f64,
}

fn parse_delimited(text: &str) -> Result<Vec<WordRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IngestError::MalformedFile(e.to_string()))?
        .clone();
    let expected = ["word_id", "script", "transcription", "stroke_id", "x", "y"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(IngestError::MalformedFile(format!(
            "expected header {}, found {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    // (word id, record, raw strokes as (id, samples))
    let mut words: Vec<(String, WordRecord, Vec<(StrokeId, Vec<Sample>)>)> = Vec::new();
    for (line, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| IngestError::MalformedFile(e.to_string()))?;
        check_finite(row.x, row.y, &|| format!("data row {}", line + 1))?;
        let same_word = words.last().is_some_and(|w| w.0 == row.word_id);
        if !same_word {
            if words.iter().any(|w| w.0 == row.word_id) {
                return Err(IngestError::MalformedFile(format!(
                    "rows of word {:?} are not contiguous",
                    row.word_id
                )));
            }
            words.push((
                row.word_id.clone(),
                WordRecord::new(row.script.clone(), row.transcription.clone(), Vec::new()),
                Vec::new(),
            ));
        }
        let word = words.last_mut().expect("word pushed above");
        let id = StrokeId(row.stroke_id);
        match word.2.last_mut() {
            Some((last_id, samples)) if *last_id == id && same_word => {
                let t = samples.len() as u64;
                samples.push(Sample::new(row.x, row.y, t));
            }
            _ => word.2.push((id, vec![Sample::new(row.x, row.y, 0)])),
        }
    }

    words
        .into_iter()
        .map(|(_, mut record, raw)| {
            record.strokes = raw
                .into_iter()
                .map(|(id, samples)| {
                    Stroke::new(id, samples).map_err(|e| IngestError::InvariantViolation(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            Ok(record)
        })
        .collect()
}

fn check_finite(x: f64, y: f64, where_: &dyn Fn() -> String) -> Result<(), IngestError> {
    if x.is_finite() && y.is_finite() {
        Ok(())
    } else {
        Err(IngestError::MalformedFile(format!("{}: non-finite coordinate", where_())))
    }
}

/// Writes the structured form; parsing the output yields an equal dataset.
pub fn serialize_dataset(d: &Dataset) -> String {
    let file = FileDataset {
        format_version: d.format_version.clone(),
        records: d
            .records
            .iter()
            .map(|r| FileRecord {
                script: r.script.clone(),
                transcription: r.transcription.clone(),
                strokes: r
                    .strokes
                    .iter()
                    .map(|s| s.samples().iter().map(|p| vec![p.x, p.y, p.t as f64]).collect())
                    .collect(),
                glyphs: r
                    .segmentation
                    .as_ref()
                    .map(|g| g.iter().map(|ids| ids.iter().map(|id| id.0).collect()).collect()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("dataset serializes")
}

fn is_uncounted(c: char) -> bool {
    c.is_whitespace() || c == '\u{200C}' || c == '\u{200D}'
}

/// Unicode scalar values in a transcription, ignoring whitespace and the
/// zero-width joiner / non-joiner.
pub fn count_unicodes(transcription: &str) -> usize {
    transcription.chars().filter(|&c| !is_uncounted(c)).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub record: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record {}: {}", self.record, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records with at least one violation.
    pub fn bad_records(&self) -> BTreeSet<usize> {
        self.violations.iter().map(|v| v.record).collect()
    }
}

pub fn validate_dataset(d: &Dataset) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, r) in d.records.iter().enumerate() {
        let mut flag = |message: String| violations.push(Violation { record: i, message });
        let name = format!("{:?} ({})", r.transcription, r.script);
        if r.script.trim().is_empty() {
            flag(format!("{name}: empty script identifier"));
        }
        if count_unicodes(&r.transcription) == 0 {
            flag(format!("{name}: transcription has no countable characters"));
        }
        if r.strokes.is_empty() {
            flag(format!("{name}: no strokes"));
        }
        let mut seen = HashSet::new();
        for s in &r.strokes {
            if !seen.insert(s.id()) {
                flag(format!("{name}: duplicate stroke id {}", s.id()));
            }
        }
        if let Some(groups) = &r.segmentation {
            let mut used = HashSet::new();
            for id in groups.iter().flatten() {
                if !seen.contains(id) {
                    flag(format!("{name}: glyph refers to unknown stroke {id}"));
                } else if !used.insert(*id) {
                    flag(format!("{name}: stroke {id} assigned to more than one glyph"));
                }
            }
            if groups.iter().any(Vec::is_empty) {
                flag(format!("{name}: empty glyph group"));
            }
            if let Some(missing) = r.strokes.iter().find(|s| !used.contains(&s.id())) {
                flag(format!("{name}: stroke {} belongs to no glyph", missing.id()));
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_STROKES: &str = r#"{"format_version": "1", "records": [
        {"script": "hindi", "transcription": "ठाणे",
         "strokes": [[[0, 0], [1, 1], [2, 0]], [[5, 5], [6, 6], [7, 7]]]}]}"#;

    fn parse(s: &str) -> Result<Dataset, IngestError> {
        parse_dataset(s.as_bytes(), DatasetFormat::StructuredText, "mem")
    }

    #[test]
    fn structured_parse_preserves_content() {
        let d = parse(TWO_STROKES).unwrap();
        assert_eq!(d.records.len(), 1);
        assert_eq!(d.records[0].strokes.len(), 2);
        let total: usize = d.records[0].strokes.iter().map(Stroke::len).sum();
        assert_eq!(total, 6);
        assert_eq!(d.records[0].strokes[1].point(2).x, 7.0);
    }

    #[test]
    fn empty_stroke_violates_invariants() {
        let s = r#"{"format_version": "1", "records": [
            {"script": "x", "transcription": "a", "strokes": [[]]}]}"#;
        assert!(matches!(parse(s), Err(IngestError::InvariantViolation(_))));
    }

    #[test]
    fn nan_is_malformed() {
        let s = r#"{"format_version": "1", "records": [
            {"script": "x", "transcription": "a", "strokes": [[[NaN, 0]]]}]}"#;
        assert!(matches!(parse(s), Err(IngestError::MalformedFile(_))));
        let csv = "word_id,script,transcription,stroke_id,x,y\nw,x,a,0,NaN,1\n";
        assert!(matches!(
            parse_dataset(csv.as_bytes(), DatasetFormat::DelimitedTable, "mem"),
            Err(IngestError::MalformedFile(_))
        ));
    }

    #[test]
    fn non_monotone_time_is_rejected() {
        let s = r#"{"format_version": "1", "records": [
            {"script": "x", "transcription": "a", "strokes": [[[0, 0, 3], [1, 1, 2]]]}]}"#;
        assert!(matches!(parse(s), Err(IngestError::InvariantViolation(_))));
    }

    #[test]
    fn bad_utf8_is_an_encoding_error() {
        let r = parse_dataset(&[0xff, 0xfe, b'{'], DatasetFormat::StructuredText, "mem");
        assert!(matches!(r, Err(IngestError::EncodingError(_))));
    }

    #[test]
    fn delimited_groups_words_and_strokes() {
        let csv = "word_id,script,transcription,stroke_id,x,y\n\
                   w1,tamil,அ,0,0,0\nw1,tamil,அ,0,1,1\nw1,tamil,அ,1,2,2\n\
                   w2,tamil,ஆ,0,3,3\n";
        let d = parse_dataset(csv.as_bytes(), DatasetFormat::DelimitedTable, "mem").unwrap();
        assert_eq!(d.records.len(), 2);
        assert_eq!(d.records[0].strokes.len(), 2);
        assert_eq!(d.records[0].strokes[0].len(), 2);
        assert_eq!(d.records[1].transcription, "ஆ");
    }

    #[test]
    fn delimited_rejects_wrong_header() {
        let csv = "a,b\n1,2\n";
        assert!(matches!(
            parse_dataset(csv.as_bytes(), DatasetFormat::DelimitedTable, "mem"),
            Err(IngestError::MalformedFile(_))
        ));
    }

    #[test]
    fn unicode_counts() {
        assert_eq!(count_unicodes("ठाणे"), 4);
        assert_eq!(count_unicodes(""), 0);
        assert_eq!(count_unicodes("फतेहपुर सिक्री"), 13);
        assert_eq!(count_unicodes("क\u{200D}ष"), 2);
    }

    #[test]
    fn validation_reports() {
        let mut d = parse(TWO_STROKES).unwrap();
        assert!(validate_dataset(&d).is_clean());

        d.records[0].transcription = String::new();
        let report = validate_dataset(&d);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].record, 0);

        let mut d = parse(TWO_STROKES).unwrap();
        let dup = d.records[0].strokes[0].clone();
        d.records[0].strokes[1] = dup;
        assert_eq!(validate_dataset(&d).violations.len(), 1);
    }

    #[test]
    fn structured_round_trip() {
        let mut d = parse(TWO_STROKES).unwrap();
        d.records[0].segmentation = Some(vec![vec![StrokeId(0), StrokeId(1)]]);
        let again = parse(&serialize_dataset(&d)).unwrap();
        assert_eq!(again.records, d.records);
    }
}
