use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::report::BenchReport;
use crate::BenchError;

pub const CSV_HEADER: &str = "planner,scenario,seed,elapsed_s,cost,edge_evals";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

pub const ALL_FORMATS: [Format; 3] = [Format::Csv, Format::Json, Format::Svg];

/// One CSV row: a single trace event.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub planner: String,
    pub scenario: String,
    pub seed: u64,
    pub elapsed_s: f64,
    /// `inf` before the first solution.
    pub cost: f64,
    pub edge_evals: u64,
}

pub fn csv_rows(report: &BenchReport) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for r in &report.records {
        for e in &r.trace {
            rows.push(CsvRow {
                planner: r.planner.clone(),
                scenario: r.scenario.clone(),
                seed: r.seed,
                elapsed_s: e.elapsed_s,
                cost: e.cost,
                edge_evals: e.edge_evals,
            });
        }
    }
    rows
}

pub fn to_csv(report: &BenchReport) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in csv_rows(report) {
        w.serialize(row).map_err(|e| BenchError::Csv(e.to_string()))?;
    }
    if report.records.iter().all(|r| r.trace.is_empty()) {
        w.write_record(CSV_HEADER.split(',')).map_err(|e| BenchError::Csv(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, BenchError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(|e| BenchError::Csv(e.to_string()))?.iter().map(String::from).collect();
    if header.join(",") != CSV_HEADER {
        return Err(BenchError::Csv(format!("unexpected header `{}`", header.join(","))));
    }
    r.deserialize().collect::<Result<_, _>>().map_err(|e| BenchError::Csv(e.to_string()))
}

pub fn to_json(report: &BenchReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn parse_json(text: &str) -> Result<BenchReport, BenchError> {
    serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 420.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn axes(&self, out: &mut String) {
        let _ = write!(
            out,
            r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#444"/>"##,
            self.x0, self.y0, self.w, self.h
        );
    }
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo < 1e-12 {
        let pad = lo.abs().max(1.0) * 0.01;
        (lo - pad, hi + pad)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

/// Cost-over-time panel (log time axis, IQR bands, median lines) next to a
/// time-to-target panel (median bars, IQR whiskers, DNF counts).
pub fn to_svg(report: &BenchReport, scenario: &str) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    out.push_str(r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    let _ = write!(out, r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, esc(scenario));

    let left = Frame { x0: 60.0, y0: 40.0, w: 520.0, h: 320.0 };
    let right = Frame { x0: 680.0, y0: 40.0, w: 250.0, h: 320.0 };
    left.axes(&mut out);
    right.axes(&mut out);

    let cells: Vec<_> = report.planners.iter().filter_map(|p| report.aggregates.cell(scenario, p)).collect();
    let (t_lo, t_hi) = (crate::stats::GRID_START, report.time_budget.max(crate::stats::GRID_START * 10.0));
    let tx = |t: f64| left.x0 + left.w * ((t.max(t_lo)).ln() - t_lo.ln()) / (t_hi.ln() - t_lo.ln());
    let bands = cells.iter().flat_map(|c| c.curve.iter().flat_map(|p| [p.q25, p.q75]));
    let (c_lo, c_hi) = bands.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (c_lo, c_hi) = if c_lo.is_finite() { nice_range(c_lo, c_hi) } else { (0.0, 1.0) };
    let cy = |c: f64| left.y0 + left.h * (1.0 - (c - c_lo) / (c_hi - c_lo));

    for (i, cell) in cells.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if cell.curve.is_empty() {
            continue;
        }
        let mut poly = String::new();
        for p in &cell.curve {
            let _ = write!(poly, "{:.2},{:.2} ", tx(p.t), cy(p.q75));
        }
        for p in cell.curve.iter().rev() {
            let _ = write!(poly, "{:.2},{:.2} ", tx(p.t), cy(p.q25));
        }
        let _ = write!(out, r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#, poly.trim_end());
        let line: Vec<String> = cell.curve.iter().map(|p| format!("{:.2},{:.2}", tx(p.t), cy(p.median))).collect();
        let _ = write!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, line.join(" "));
    }
    let mut t = 0.01;
    while t <= t_hi * 1.0001 {
        let x = tx(t);
        let _ = write!(out, r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#444"/>"##, left.y0 + left.h, left.y0 + left.h + 4.0);
        let _ = write!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{t}</text>"#, left.y0 + left.h + 16.0);
        t *= 10.0;
    }
    for k in 0..=4 {
        let c = c_lo + (c_hi - c_lo) * k as f64 / 4.0;
        let y = cy(c);
        let _ = write!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{c:.2}</text>"#, left.x0 - 4.0, y + 4.0);
    }
    let _ = write!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">time (s)</text>"#, left.x0 + left.w / 2.0, HEIGHT - 22.0);
    let _ = write!(out, r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">cost</text>"#, left.y0 + left.h / 2.0, left.y0 + left.h / 2.0);

    let tmax = cells
        .iter()
        .filter_map(|c| c.time_to_target.q75)
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let slot = right.w / cells.len().max(1) as f64;
    let by = |t: f64| right.y0 + right.h * (1.0 - t / (tmax * 1.1));
    for (i, cell) in cells.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let xc = right.x0 + slot * (i as f64 + 0.5);
        let s = &cell.time_to_target;
        if let (Some(m), Some(a), Some(b)) = (s.median, s.q25, s.q75) {
            let _ = write!(
                out,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{color}" fill-opacity="0.7"/>"#,
                xc - slot * 0.3,
                by(m),
                slot * 0.6,
                right.y0 + right.h - by(m)
            );
            let _ = write!(out, r##"<line x1="{xc:.1}" y1="{:.1}" x2="{xc:.1}" y2="{:.1}" stroke="#222"/>"##, by(a), by(b));
        }
        let _ = write!(out, r#"<text x="{xc:.1}" y="{:.1}" text-anchor="middle">DNF {}</text>"#, right.y0 + 14.0, s.dnf);
        let _ = write!(out, r#"<text x="{xc:.1}" y="{:.1}" text-anchor="middle" fill="{color}">{}</text>"#, right.y0 + right.h + 16.0, esc(&cell.planner));
    }
    let _ = write!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">time to target (s), max {tmax:.3}</text>"#, right.x0 + right.w / 2.0, HEIGHT - 22.0);

    for (i, cell) in cells.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = left.y0 + 14.0 + 16.0 * i as f64;
        let _ = write!(out, r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/>"#, left.x0 + left.w - 150.0, y - 9.0);
        let _ = write!(out, r#"<text x="{:.1}" y="{y:.1}">{}</text>"#, left.x0 + left.w - 135.0, esc(&cell.planner));
    }
    out.push_str("</svg>\n");
    out
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, BenchError> {
    std::fs::write(&path, text).map_err(|e| BenchError::io(&path, e))?;
    Ok(path)
}

/// Writes `records.csv`, `report.json` and one `<scenario>.svg` per scenario
/// into `dir`, creating it if needed. Returns the written paths.
pub fn emit(report: &BenchReport, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, BenchError> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Csv => written.push(write(dir.join("records.csv"), &to_csv(report)?)?),
            Format::Json => written.push(write(dir.join("report.json"), &to_json(report))?),
            Format::Svg => {
                for sc in &report.scenarios {
                    written.push(write(dir.join(format!("{}.svg", file_stem(&sc.name))), &to_svg(report, &sc.name))?);
                }
            }
        }
    }
    Ok(written)
}
