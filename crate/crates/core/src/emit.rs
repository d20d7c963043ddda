//! CSV, JSON and SVG renderings of a [`SweepResult`].

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::AntennaPolicy;
use crate::sweep::{Axis, AxisValue, SweepMetric, SweepResult, SweepRow};

pub const CSV_HEADER: [&str; 6] = ["axis", "axis_value", "snr_db", "metric", "value", "ci95"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::config(format!("unknown format `{other}`"))),
        }
    }
}

/// Header written alongside the rows in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub n_trials: u64,
    pub antenna_policy: AntennaPolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Largest gap between `1 − Q₁` and the outage actually reported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_order_marcum_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub metadata: Metadata,
    pub rows: Vec<SweepRow>,
}

fn csv_error(e: csv::Error) -> Error {
    Error::config(format!("csv: {e}"))
}

/// Floats use the shortest text that parses back to the same value.
pub fn to_csv(result: &SweepResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in &result.rows {
        w.write_record([
            r.axis.clone(),
            r.axis_value.to_string(),
            r.snr_db.to_string(),
            r.metric.as_str().to_string(),
            r.value.to_string(),
            r.ci95.to_string(),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The axis a label refers to (`k:single` is the `k` axis).
fn axis_of(label: &str) -> Result<Axis> {
    label.split(':').next().unwrap_or(label).parse()
}

pub fn from_csv(text: &str) -> Result<SweepResult> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::config(format!("unexpected csv header {header:?}")));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::config(format!("bad number `{s}` in csv")))
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_error)?;
        let axis = rec[0].to_string();
        rows.push(SweepRow {
            axis_value: AxisValue::parse(axis_of(&axis)?, &rec[1])?,
            axis,
            snr_db: num(&rec[2])?,
            metric: rec[3].parse()?,
            value: num(&rec[4])?,
            ci95: num(&rec[5])?,
        });
    }
    Ok(SweepResult { rows })
}

pub fn to_json(result: &SweepResult, metadata: &Metadata) -> Result<String> {
    let report = JsonReport {
        metadata: metadata.clone(),
        rows: result.rows.clone(),
    };
    serde_json::to_string_pretty(&report).map_err(|e| Error::config(format!("json: {e}")))
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Outage,
    Capacity,
    Ber,
}

impl Family {
    fn of(m: SweepMetric) -> Self {
        match m {
            SweepMetric::OutageAnalytic | SweepMetric::OutageMc => Family::Outage,
            SweepMetric::BerMc => Family::Ber,
            _ => Family::Capacity,
        }
    }

    fn title(&self) -> &'static str {
        match self {
            Family::Outage => "Outage probability",
            Family::Capacity => "Ergodic capacity (bit/s/Hz)",
            Family::Ber => "Bit error rate",
        }
    }

    fn log_scale(&self) -> bool {
        *self != Family::Capacity
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];
const LOG_FLOOR: f64 = 1e-6;
const PANEL_W: f64 = 560.0;
const PANEL_H: f64 = 340.0;
const LEGEND_W: f64 = 240.0;
const MARGIN: (f64, f64, f64, f64) = (60.0, 20.0, 40.0, 50.0); // left, right, top, bottom

struct Series<'a> {
    name: String,
    metric: SweepMetric,
    points: Vec<&'a SweepRow>,
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// One chart per metric family (outage, capacity, BER) present in `result`,
/// stacked vertically. Outage and BER use a log axis floored at 1e-6.
pub fn to_svg(result: &SweepResult, title: &str) -> String {
    let mut families: Vec<Family> = Vec::new();
    for r in &result.rows {
        let f = Family::of(r.metric);
        if !families.contains(&f) {
            families.push(f);
        }
    }
    let width = PANEL_W + LEGEND_W;
    let height = 30.0 + PANEL_H * families.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        xml_escape(title)
    );
    for (i, fam) in families.iter().enumerate() {
        panel(&mut out, result, *fam, 30.0 + PANEL_H * i as f64);
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn panel(out: &mut String, result: &SweepResult, fam: Family, top: f64) {
    let mut series: Vec<Series> = Vec::new();
    for r in result.rows.iter().filter(|r| Family::of(r.metric) == fam) {
        let name = if r.axis_value == AxisValue::Number(r.snr_db) && r.axis == "snr_db" {
            r.metric.as_str().to_string()
        } else {
            format!("{}={} {}", r.axis, r.axis_value, r.metric.as_str())
        };
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(r),
            None => series.push(Series {
                name,
                metric: r.metric,
                points: vec![r],
            }),
        }
    }
    let (ml, mr, mt, mb) = MARGIN;
    let (x0, x1) = (ml, PANEL_W - mr);
    let (y0, y1) = (top + mt, top + PANEL_H - mb);

    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.snr_db));
    let (mut xmin, mut xmax) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if xmin >= xmax {
        xmin -= 1.0;
        xmax += 1.0;
    }
    let tr = |v: f64| if fam.log_scale() { v.max(LOG_FLOOR).log10() } else { v };
    let (ymin, ymax) = if fam.log_scale() {
        (LOG_FLOOR.log10(), 0.0)
    } else {
        let top_v = series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.value))
            .fold(0.0f64, f64::max);
        (0.0, if top_v > 0.0 { top_v * 1.05 } else { 1.0 })
    };
    let px = |x: f64| x0 + (x - xmin) / (xmax - xmin) * (x1 - x0);
    let py = |y: f64| y1 - (tr(y) - ymin) / (ymax - ymin) * (y1 - y0);

    let _ = writeln!(
        out,
        r##"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        x1 - x0,
        y1 - y0
    );
    // x ticks
    let step = nice_step(xmax - xmin, 8);
    let mut t = (xmin / step).ceil() * step;
    while t <= xmax + 1e-9 {
        let x = px(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            y1 + 15.0,
            fmt_tick(t)
        );
        t += step;
    }
    // y ticks
    if fam.log_scale() {
        for e in (LOG_FLOOR.log10() as i32)..=0 {
            let y = py(10f64.powi(e));
            let _ = writeln!(
                out,
                r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
                x0 - 5.0,
                y + 4.0
            );
        }
    } else {
        let step = nice_step(ymax - ymin, 6);
        let mut t = 0.0;
        while t <= ymax + 1e-9 {
            let y = py(t);
            let _ = writeln!(
                out,
                r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                y + 4.0,
                fmt_tick(t)
            );
            t += step;
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">SNR (dB)</text>"#,
        (x0 + x1) / 2.0,
        y1 + 34.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        (x0 + x1) / 2.0,
        y0 - 8.0,
        fam.title()
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = match s.metric {
            SweepMetric::CapacityBound => r#" stroke-dasharray="2 3""#,
            m if m.mc_metric().is_some() => r#" stroke-dasharray="6 3""#,
            _ => "",
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", px(p.snr_db), py(p.value)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{}"/>"#,
            pts.join(" ")
        );
        let ly = y0 + 14.0 + 16.0 * i as f64;
        let lx = PANEL_W + 5.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            xml_escape(&s.name)
        );
    }
}

/// Writes `contents` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| Error::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}
