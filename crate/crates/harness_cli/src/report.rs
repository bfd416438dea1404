//! CSV tables and scatter plots of benchmark results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use model_core::model::ObjectiveVector;

use crate::bench::{BenchResult, BenchRow, RowStatus};

pub const METRICS_HEADER: [&str; 8] = [
    "algo",
    "instance",
    "mid",
    "sm",
    "dm",
    "cpu_seconds",
    "saw",
    "n_points",
];

fn seconds_cell(row: &BenchRow) -> String {
    row.seconds.map(|s| format!("{s:.3}")).unwrap_or_default()
}

fn metrics_csv(result: &BenchResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(METRICS_HEADER)?;
    for row in &result.rows {
        let cells = match &row.report {
            Some(r) => [
                r.mid.to_string(),
                r.sm.to_string(),
                r.dm.to_string(),
                seconds_cell(row),
                r.saw.to_string(),
                r.n_points.to_string(),
            ],
            None => {
                let dash = || "-".to_string();
                [dash(), dash(), dash(), seconds_cell(row), dash(), dash()]
            }
        };
        w.write_record([row.algo.clone(), row.instance.clone()].into_iter().chain(cells))?;
    }
    Ok(w.into_inner()?)
}

fn runtime_csv(result: &BenchResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["algo", "instance", "status", "seconds"])?;
    for row in &result.rows {
        let status = match &row.status {
            RowStatus::Ok => "ok".to_string(),
            RowStatus::TimedOut => "timed-out".to_string(),
            RowStatus::Failed(msg) => format!("failed: {msg}"),
        };
        w.write_record([&row.algo, &row.instance, &status, &seconds_cell(row)])?;
    }
    Ok(w.into_inner()?)
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<PathBuf> {
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// `metrics.csv` and `runtime.csv` in `dir`.
pub fn write_csv(result: &BenchResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(vec![
        write(dir.join("metrics.csv"), &metrics_csv(result)?)?,
        write(dir.join("runtime.csv"), &runtime_csv(result)?)?,
    ])
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn marker(out: &mut String, class: &str, style: usize, x: f64, y: f64) {
    let color = COLORS[style % COLORS.len()];
    match style % 3 {
        0 => writeln!(
            out,
            r##"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="{color}"/>"##
        ),
        1 => writeln!(
            out,
            r##"<rect class="{class}" x="{:.2}" y="{:.2}" width="7" height="7" fill="none" stroke="{color}"/>"##,
            x - 3.5,
            y - 3.5
        ),
        _ => writeln!(
            out,
            r##"<path class="{class}" d="M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2} Z" fill="none" stroke="{color}"/>"##,
            x,
            y - 4.5,
            x + 4.5,
            y + 4.0,
            x - 4.5,
            y + 4.0
        ),
    }
    .expect("writing to a String");
}

/// Scatter of one objective pair, one marker style per series.
pub fn scatter_svg(series: &[(&str, &[ObjectiveVector])], pair: (usize, usize)) -> String {
    let (a, b) = pair;
    let pts = series.iter().flat_map(|(_, f)| f.iter()).map(|p| {
        let v = p.as_array();
        (v[a], v[b])
    });
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let sx = |x: f64| MARGIN + (x - x0) / span(x0, x1) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / span(y0, y1) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"##
    );
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let bottom = HEIGHT - MARGIN;
    let _ = writeln!(out, r##"<text x="{MARGIN}" y="{}">{x0}</text>"##, bottom + 15.0);
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" text-anchor="end">{x1}</text>"##,
        WIDTH - MARGIN,
        bottom + 15.0
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" text-anchor="middle">f{}</text>"##,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        a + 1
    );
    let _ = writeln!(out, r##"<text x="5" y="{bottom}">{y0}</text>"##);
    let _ = writeln!(out, r##"<text x="5" y="{}">{y1}</text>"##, MARGIN);
    let _ = writeln!(out, r##"<text x="5" y="{}">f{}</text>"##, HEIGHT / 2.0, b + 1);
    for (s, (name, front)) in series.iter().enumerate() {
        let ly = 15.0 + 14.0 * s as f64;
        marker(&mut out, "legend", s, WIDTH - 120.0, ly - 4.0);
        let _ = writeln!(out, r##"<text x="{}" y="{ly}">{name}</text>"##, WIDTH - 110.0);
        for p in front.iter() {
            let v = p.as_array();
            marker(&mut out, "marker", s, sx(v[a]), sy(v[b]));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Three SVGs per instance with at least one finished front, every
/// algorithm overlaid.
pub fn write_svg(result: &BenchResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut instances: Vec<&str> = Vec::new();
    for row in &result.rows {
        if !instances.contains(&row.instance.as_str()) {
            instances.push(&row.instance);
        }
    }
    let mut written = Vec::new();
    for name in instances {
        let series: Vec<(&str, &[ObjectiveVector])> = result
            .rows
            .iter()
            .filter(|r| r.instance == name && r.status == RowStatus::Ok && !r.front.is_empty())
            .map(|r| (r.algo.as_str(), r.front.as_slice()))
            .collect();
        if series.is_empty() {
            continue;
        }
        for pair in PAIRS {
            let file = dir.join(format!("{name}_f{}_f{}.svg", pair.0 + 1, pair.1 + 1));
            written.push(write(file, scatter_svg(&series, pair).as_bytes())?);
        }
    }
    Ok(written)
}
