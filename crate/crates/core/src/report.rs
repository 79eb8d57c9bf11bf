//! Serialization of results: per-word and per-script tables, comparison
//! tables across scripts, and SVG renderings of annotated glyphs.

use std::fmt::Write as _;

use serde::Serialize;

use crate::metrics::{Measures, MetricsRow, ScriptSummary};
use crate::model::{Glyph, Point, ShapePoint, ShapePointKind};

/// Measures compared across scripts, in output order.
pub const MEASURES: [&str; 6] = [
    "strokes_per_unicode",
    "curvelength_per_unicode",
    "stability",
    "c1",
    "c2",
    "c3",
];

/// One measure across scripts, ascending by value; an unbounded stability
/// is stored as `f64::INFINITY` and sorts last.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub measure: String,
    pub rows: Vec<(String, f64)>,
}

impl ComparisonTable {
    pub fn new(measure: impl Into<String>, mut rows: Vec<(String, f64)>) -> Self {
        rows.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Self {
            measure: measure.into(),
            rows,
        }
    }

    pub fn value(&self, script: &str) -> Option<f64> {
        self.rows.iter().find(|(s, _)| s == script).map(|r| r.1)
    }
}

fn measure_value(m: &Measures, measure: &str) -> f64 {
    match measure {
        "strokes_per_unicode" => m.strokes_per_unicode,
        "curvelength_per_unicode" => m.curvelength_per_unicode,
        "stability" => m.stability.as_f64(),
        "c1" => m.c1_per_unicode,
        "c2" => m.c2_per_unicode,
        "c3" => m.c3_per_unicode,
        other => panic!("unknown measure {other}"),
    }
}

/// The six comparison tables for a set of script summaries.
pub fn comparison_tables(summaries: &[ScriptSummary]) -> Vec<ComparisonTable> {
    MEASURES
        .iter()
        .map(|&m| {
            let rows = summaries
                .iter()
                .map(|s| (s.script.clone(), measure_value(&s.measures, m)))
                .collect();
            ComparisonTable::new(m, rows)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryFormat {
    DelimitedTable,
    StructuredText,
}

/// Shortest round-trip decimal; infinity prints as `inf`.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() && v > 0.0 {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

pub fn emit_summary(tables: &[ComparisonTable], format: SummaryFormat) -> Vec<u8> {
    match format {
        SummaryFormat::DelimitedTable => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(["measure", "script", "value"]).expect("in-memory write");
            for t in tables {
                for (script, v) in &t.rows {
                    w.write_record([t.measure.as_str(), script.as_str(), &format_value(*v)])
                        .expect("in-memory write");
                }
            }
            w.into_inner().expect("in-memory flush")
        }
        SummaryFormat::StructuredText => {
            #[derive(Serialize)]
            struct Row<'a> {
                script: &'a str,
                value: serde_json::Value,
            }
            #[derive(Serialize)]
            struct Table<'a> {
                measure: &'a str,
                rows: Vec<Row<'a>>,
            }
            let out: Vec<Table> = tables
                .iter()
                .map(|t| Table {
                    measure: &t.measure,
                    rows: t
                        .rows
                        .iter()
                        .map(|(s, v)| Row {
                            script: s,
                            value: serde_json::Number::from_f64(*v)
                                .map(serde_json::Value::Number)
                                .unwrap_or_else(|| serde_json::Value::String(format_value(*v))),
                        })
                        .collect(),
                })
                .collect();
            let mut bytes = serde_json::to_vec_pretty(&out).expect("plain data serializes");
            bytes.push(b'\n');
            bytes
        }
    }
}

fn measure_columns() -> Vec<String> {
    let mut cols: Vec<String> = vec!["unicode_count".into(), "stroke_count".into()];
    cols.extend(ShapePointKind::COUNTED.iter().map(|k| k.symbol().to_string()));
    cols.extend(
        [
            "net_c1",
            "net_c2",
            "net_c3",
            "c1_per_unicode",
            "c2_per_unicode",
            "c3_per_unicode",
            "curvelength",
            "curvelength_per_unicode",
            "stability",
            "strokes_per_unicode",
        ]
        .map(String::from),
    );
    cols
}

fn measure_cells(m: &Measures) -> Vec<String> {
    let mut cells = vec![m.unicode_count.to_string(), m.stroke_count.to_string()];
    cells.extend(ShapePointKind::COUNTED.iter().map(|&k| m.census.get(k).to_string()));
    cells.extend([
        m.net_c1.to_string(),
        m.net_c2.to_string(),
        m.net_c3.to_string(),
        format_value(m.c1_per_unicode),
        format_value(m.c2_per_unicode),
        format_value(m.c3_per_unicode),
        format_value(m.curvelength),
        format_value(m.curvelength_per_unicode),
        format_value(m.stability.as_f64()),
        format_value(m.strokes_per_unicode),
    ]);
    cells
}

fn write_table(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Per-word metrics table, rows in the order given.
pub fn metrics_table(rows: &[MetricsRow]) -> Vec<u8> {
    let mut header = vec!["script".to_string(), "word".to_string()];
    header.extend(measure_columns());
    write_table(
        header,
        rows.iter().map(|r| {
            let mut cells = vec![r.script.clone(), r.word.clone()];
            cells.extend(measure_cells(&r.measures));
            cells
        }),
    )
}

/// Per-script summary table.
pub fn summary_table(summaries: &[ScriptSummary]) -> Vec<u8> {
    let mut header = vec!["script".to_string(), "words".to_string()];
    header.extend(measure_columns());
    write_table(
        header,
        summaries.iter().map(|s| {
            let mut cells = vec![s.script.clone(), s.words.to_string()];
            cells.extend(measure_cells(&s.measures));
            cells
        }),
    )
}

const STROKE_COLOUR: &str = "#222222";

fn marker_colour(kind: ShapePointKind) -> &'static str {
    use ShapePointKind::*;
    match kind {
        E => "#1f77b4",
        B => "#2ca02c",
        X => "#9467bd",
        C => "#d62728",
        T => "#ff7f0e",
        D => "#8c564b",
        A => "#e377c2",
        I => "#7f7f7f",
    }
}

/// SVG document for one glyph with a marker per shape point.
///
/// Glyph coordinates have y pointing up, so y is negated on output.
pub fn render_annotated_glyph(glyph: &Glyph, points: &[ShapePoint]) -> Vec<u8> {
    let (lo, hi) = glyph.bounds();
    let extent = (hi.x - lo.x).max(hi.y - lo.y).max(1e-6);
    let (w, h) = ((hi.x - lo.x).max(1e-6), (hi.y - lo.y).max(1e-6));
    let (pad_x, pad_y) = (0.1 * w.max(0.1 * extent), 0.1 * h.max(0.1 * extent));
    let (vx, vy) = (lo.x - pad_x, -hi.y - pad_y);
    let (vw, vh) = (w + 2.0 * pad_x, h + 2.0 * pad_y);
    let r = 0.02 * extent;
    let stroke_w = 0.006 * extent;
    let f = |v: f64| format!("{:.5}", v);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        f(vx),
        f(vy),
        f(vw),
        f(vh)
    );
    if let Some(label) = glyph.label() {
        let _ = writeln!(s, "<title>{}</title>", escape(label));
    }
    for stroke in glyph.strokes() {
        let mut d = String::new();
        for (i, p) in stroke.points().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, f(p.x), f(-p.y));
        }
        let _ = writeln!(
            s,
            "<path class=\"stroke\" data-stroke=\"{}\" d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
            stroke.id(),
            d,
            STROKE_COLOUR,
            f(stroke_w)
        );
    }
    for p in points {
        let c = Point::new(p.position.x, -p.position.y);
        let colour = marker_colour(p.kind);
        let sym = p.kind.symbol();
        let _ = writeln!(s, "<g class=\"marker marker-{sym}\">");
        let outline = format!("fill=\"none\" stroke=\"{colour}\" stroke-width=\"{}\"", f(stroke_w));
        let shape = match p.kind {
            ShapePointKind::E | ShapePointKind::I => {
                format!("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {outline}/>", f(c.x), f(c.y), f(r))
            }
            ShapePointKind::D => format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{colour}\"/>",
                f(c.x),
                f(c.y),
                f(r)
            ),
            ShapePointKind::B => format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {outline}/>",
                f(c.x - r),
                f(c.y - r),
                f(2.0 * r),
                f(2.0 * r)
            ),
            ShapePointKind::X => path(
                &[
                    ('M', c.x - r, c.y - r),
                    ('L', c.x + r, c.y + r),
                    ('M', c.x - r, c.y + r),
                    ('L', c.x + r, c.y - r),
                ],
                false,
                &outline,
            ),
            ShapePointKind::C => path(
                &[('M', c.x, c.y - r), ('L', c.x + r, c.y + r), ('L', c.x - r, c.y + r)],
                true,
                &outline,
            ),
            ShapePointKind::T => path(
                &[('M', c.x - r, c.y - r), ('L', c.x + r, c.y - r), ('M', c.x, c.y - r), ('L', c.x, c.y + r)],
                false,
                &outline,
            ),
            ShapePointKind::A => path(
                &[('M', c.x, c.y - r), ('L', c.x + r, c.y), ('L', c.x, c.y + r), ('L', c.x - r, c.y)],
                true,
                &outline,
            ),
        };
        let _ = writeln!(s, "{shape}");
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" fill=\"{colour}\">{sym}</text>",
            f(c.x + 1.2 * r),
            f(c.y - 1.2 * r),
            f(3.0 * r)
        );
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s.into_bytes()
}

fn path(cmds: &[(char, f64, f64)], closed: bool, attrs: &str) -> String {
    let mut d = String::new();
    for (i, (c, x, y)) in cmds.iter().enumerate() {
        if i > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{c}{:.5} {:.5}", x, y);
    }
    if closed {
        d.push_str(" Z");
    }
    format!("<path d=\"{d}\" {attrs}/>")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{C3Kinds, Measures};
    use crate::model::{PipelineConfig, ShapePointCensus, Stroke, StrokeId};
    use crate::shapepoints::classify_glyph;

    fn summary(script: &str, census: &[(ShapePointKind, u32)]) -> ScriptSummary {
        ScriptSummary {
            script: script.into(),
            words: 1,
            measures: Measures::from_totals(2, 3, ShapePointCensus::from_pairs(census), 1.5, C3Kinds::Ctda)
                .unwrap(),
        }
    }

    #[test]
    fn one_table_two_scripts_is_three_lines() {
        let t = ComparisonTable::new("c1", vec![("b".into(), 2.0), ("a".into(), 1.0)]);
        let out = String::from_utf8(emit_summary(&[t], SummaryFormat::DelimitedTable)).unwrap();
        assert_eq!(out, "measure,script,value\nc1,a,1\nc1,b,2\n");
    }

    #[test]
    fn emission_is_deterministic() {
        let tables = comparison_tables(&[summary("x", &[(ShapePointKind::E, 2)]), summary("y", &[])]);
        for fmt in [SummaryFormat::DelimitedTable, SummaryFormat::StructuredText] {
            assert_eq!(emit_summary(&tables, fmt), emit_summary(&tables, fmt));
        }
    }

    #[test]
    fn unbounded_stability_is_inf_and_sorts_last() {
        let tables = comparison_tables(&[
            summary("steady", &[(ShapePointKind::E, 2)]),
            summary("knotted", &[(ShapePointKind::E, 2), (ShapePointKind::T, 1)]),
        ]);
        let stab = tables.iter().find(|t| t.measure == "stability").unwrap();
        assert_eq!(stab.rows[0], ("knotted".to_string(), 2.0));
        assert_eq!(stab.rows[1].0, "steady");
        let out = String::from_utf8(emit_summary(std::slice::from_ref(stab), SummaryFormat::DelimitedTable)).unwrap();
        assert!(out.contains("stability,steady,inf\n"));
        let json = String::from_utf8(emit_summary(std::slice::from_ref(stab), SummaryFormat::StructuredText)).unwrap();
        assert!(json.contains("\"inf\""));
    }

    #[test]
    fn six_tables_in_fixed_order() {
        let tables = comparison_tables(&[summary("x", &[]), summary("y", &[])]);
        let names: Vec<&str> = tables.iter().map(|t| t.measure.as_str()).collect();
        assert_eq!(names, MEASURES);
        assert!(tables.iter().all(|t| t.rows.len() == 2));
    }

    fn count(doc: &[u8], needle: &str) -> usize {
        String::from_utf8_lossy(doc).matches(needle).count()
    }

    #[test]
    fn circle_renders_five_markers() {
        let pts: Vec<_> = (0..64)
            .map(|i| {
                let a = std::f64::consts::FRAC_PI_4 + std::f64::consts::TAU * i as f64 / 63.0;
                (0.5 + 0.5 * a.cos(), 0.5 + 0.5 * a.sin())
            })
            .collect();
        let g = Glyph::new(vec![Stroke::from_points(StrokeId(0), &pts).unwrap()], None).unwrap();
        let (points, _) = classify_glyph(&g, &PipelineConfig::default());
        let doc = render_annotated_glyph(&g, &points);
        assert_eq!(count(&doc, "class=\"marker "), 5);
        assert_eq!(count(&doc, "class=\"stroke\""), 1);
        assert_eq!(doc, render_annotated_glyph(&g, &points));
    }

    #[test]
    fn no_points_means_paths_only() {
        let g = Glyph::new(
            vec![
                Stroke::from_points(StrokeId(0), &[(0.0, 0.0), (1.0, 1.0)]).unwrap(),
                Stroke::from_points(StrokeId(1), &[(1.0, 0.0), (0.0, 1.0)]).unwrap(),
            ],
            None,
        )
        .unwrap();
        let doc = render_annotated_glyph(&g, &[]);
        assert_eq!(count(&doc, "class=\"marker "), 0);
        assert_eq!(count(&doc, "class=\"stroke\""), 2);
        assert!(String::from_utf8_lossy(&doc).contains("viewBox=\"-0.10000 -1.10000 1.20000 1.20000\""));
    }

    #[test]
    fn dot_renders_one_filled_marker() {
        let g = Glyph::new(vec![Stroke::from_points(StrokeId(0), &[(0.3, 0.3)]).unwrap()], None).unwrap();
        let (points, _) = classify_glyph(&g, &PipelineConfig::default());
        let doc = render_annotated_glyph(&g, &points);
        assert_eq!(count(&doc, "class=\"marker marker-D\""), 1);
        assert_eq!(count(&doc, "fill=\"#8c564b\""), 2);
    }
}
