//! Line charts from a metrics CSV, rendered as standalone SVG.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("unknown field `{field}`; available: {}", .available.join(", "))]
    UnknownField { field: String, available: Vec<String> },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("no numeric ({x}, {y}) points in the input")]
    Empty { x: String, y: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Running x sum, y sum and count for one sweep cell.
type Sums = (f64, f64, usize);

/// Seed-averaged series from CSV text. Rows sharing `(group, parameter,
/// value)` are one sweep cell and collapse to the mean of their x and y.
/// Rows whose x or y is empty or non-numeric are skipped.
pub fn series_from_csv(text: &str, x: &str, y: &str, group: Option<&str>) -> Result<Vec<Series>, PlotError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let col = |f: &str| {
        header
            .iter()
            .position(|h| h == f)
            .ok_or_else(|| PlotError::UnknownField { field: f.to_string(), available: header.clone() })
    };
    let xi = col(x)?;
    let yi = col(y)?;
    let gi = group.map(col).transpose()?;
    let pi = header.iter().position(|h| h == "parameter");
    let vi = header.iter().position(|h| h == "value");

    let mut cells: BTreeMap<String, BTreeMap<(String, String), Sums>> = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec?;
        let get = |i: Option<usize>| i.and_then(|i| rec.get(i)).unwrap_or("").to_string();
        let (Ok(xv), Ok(yv)) = (get(Some(xi)).parse::<f64>(), get(Some(yi)).parse::<f64>()) else {
            continue;
        };
        let name = match gi {
            Some(_) => get(gi),
            None => y.to_string(),
        };
        let e = cells.entry(name).or_default().entry((get(pi), get(vi))).or_insert((0.0, 0.0, 0));
        e.0 += xv;
        e.1 += yv;
        e.2 += 1;
    }
    let series: Vec<Series> = cells
        .into_iter()
        .map(|(name, c)| {
            let mut points: Vec<(f64, f64)> = c.values().map(|&(sx, sy, n)| (sx / n as f64, sy / n as f64)).collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            Series { name, points }
        })
        .collect();
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(PlotError::Empty { x: x.to_string(), y: y.to_string() });
    }
    Ok(series)
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

fn label(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 1e5) {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render series as a line chart with axes, ticks and a legend.
pub fn render_svg(series: &[Series], x_label: &str, y_label: &str) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = padded(x0, x1);
    let (y0, y1) = padded(y0, y1);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let (px, py) = (sx(fx), sy(fy));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#,
            TOP + ph,
            TOP + ph + 5.0
        );
        let _ =
            writeln!(s, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, label(fx));
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{py:.1}" x2="{LEFT}" y2="{py:.1}" stroke="black"/>"#, LEFT - 5.0);
        let _ =
            writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, LEFT - 8.0, py + 4.0, label(fy));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        if pts.len() > 1 {
            let _ =
                writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, pts.join(" "));
        }
        for &(x, y) in &ser.points {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&ser.name));
    }
    s.push_str("</svg>\n");
    s
}
