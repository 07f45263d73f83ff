//! Audit series as CSV and as time-series SVG figures.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::audit::{
    parse_date, sort_parties, AuditRow, AuditSeries, PartyRecord, Relevance, TimePoint,
    AUDIT_HEADER, LOW_SAMPLE_THRESHOLD,
};

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("audit CSV line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Nine-category alignment order, then acronym.
pub fn order_parties(parties: &[PartyRecord]) -> Vec<PartyRecord> {
    let mut v = parties.to_vec();
    sort_parties(&mut v);
    v
}

fn row_order(a: &AuditRow, b: &AuditRow) -> std::cmp::Ordering {
    a.source
        .cmp(&b.source)
        .then(a.alignment.cmp(&b.alignment))
        .then_with(|| a.canonical_acronym.cmp(&b.canonical_acronym))
        .then(a.time_point.cmp(&b.time_point))
}

/// Rows per source in figure order, then by time point.
pub fn emit_series_csv(series: &AuditSeries) -> Vec<u8> {
    rows_csv(&series.rows)
}

pub fn rows_csv(rows: &[AuditRow]) -> Vec<u8> {
    let mut rows: Vec<&AuditRow> = rows.iter().collect();
    rows.sort_by(|a, b| row_order(a, b));
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(AUDIT_HEADER);
    out.push('\n');
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.write_record([
            r.source.clone(),
            r.time_point.to_string(),
            r.canonical_acronym.clone(),
            r.alignment.to_string(),
            r.lower_count.to_string(),
            r.upper_count.to_string(),
            format!("{:.6}", r.lower_share),
            format!("{:.6}", r.upper_share),
            format!("{:.6}", r.baseline_share),
            r.verdict.to_string(),
            r.active_total.to_string(),
        ])
        .expect("in-memory write");
    }
    let body = w.into_inner().expect("in-memory flush");
    let mut bytes = out.into_bytes();
    bytes.extend(body);
    bytes
}

/// Reads an audit CSV back, reporting the first bad line.
pub fn parse_audit_csv(data: &[u8]) -> Result<Vec<AuditRow>, ReportError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(data);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let bad = |message: String| ReportError::Malformed { line, message };
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if i == 0 {
            let header = rec.iter().collect::<Vec<_>>().join(",");
            if header != AUDIT_HEADER {
                return Err(bad(format!("header `{header}`, expected `{AUDIT_HEADER}`")));
            }
            continue;
        }
        if rec.len() != 11 {
            return Err(bad(format!("{} fields, expected 11", rec.len())));
        }
        let f = |k: usize| rec.get(k).unwrap_or("").trim();
        let count = |k: usize, name: &str| {
            f(k).parse::<usize>()
                .map_err(|_| bad(format!("{name} `{}` is not a count", f(k))))
        };
        let share = |k: usize, name: &str| {
            f(k).parse::<f64>()
                .ok()
                .filter(|s| (0.0..=1.0).contains(s))
                .ok_or_else(|| bad(format!("{name} `{}` is not a share", f(k))))
        };
        let time_point = parse_date(f(1))
            .map(TimePoint)
            .ok_or_else(|| bad(format!("time_point `{}`", f(1))))?;
        let row = AuditRow {
            source: f(0).to_owned(),
            time_point,
            canonical_acronym: f(2).to_owned(),
            alignment: f(3).parse().map_err(|e: crate::audit::AuditError| bad(e.to_string()))?,
            lower_count: count(4, "lower_count")?,
            upper_count: count(5, "upper_count")?,
            lower_share: share(6, "lower_share")?,
            upper_share: share(7, "upper_share")?,
            baseline_share: share(8, "baseline_share")?,
            verdict: f(9).parse().map_err(|e: crate::audit::AuditError| bad(e.to_string()))?,
            active_total: count(10, "active_total")?,
        };
        if !(row.lower_count <= row.upper_count && row.upper_count <= row.active_total) {
            return Err(bad("counts violate lower <= upper <= active_total".into()));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    /// Lower/upper band per party with a thin baseline line.
    #[default]
    Line,
    /// Lower bounds stacked on top of each other.
    Stacked,
}

impl std::str::FromStr for RenderStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "line" => Ok(RenderStyle::Line),
            "stacked" => Ok(RenderStyle::Stacked),
            other => Err(format!("unknown style `{other}` (expected line or stacked)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub lower: f64,
    pub upper: f64,
    pub baseline: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartySeries {
    pub party: PartyRecord,
    /// One point per figure time point.
    pub points: Vec<SeriesPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub title: String,
    pub source: String,
    pub body: String,
    pub time_points: Vec<TimePoint>,
    pub active_counts: Vec<usize>,
    pub series: Vec<PartySeries>,
    pub style: RenderStyle,
}

impl FigureSpec {
    /// Builds the figure for one source from audit rows. Missing
    /// (party, time point) cells are drawn as zero.
    pub fn from_rows(rows: &[AuditRow], source: &str, body: &str, style: RenderStyle) -> Self {
        let rows: Vec<&AuditRow> = rows.iter().filter(|r| r.source == source).collect();
        let mut time_points: Vec<TimePoint> = rows.iter().map(|r| r.time_point).collect();
        time_points.sort();
        time_points.dedup();

        let mut active: BTreeMap<TimePoint, usize> = BTreeMap::new();
        let mut parties: BTreeMap<&str, PartyRecord> = BTreeMap::new();
        let mut cells: BTreeMap<(&str, TimePoint), SeriesPoint> = BTreeMap::new();
        for r in &rows {
            active.insert(r.time_point, r.active_total);
            parties.entry(&r.canonical_acronym).or_insert_with(|| {
                PartyRecord::new(r.canonical_acronym.clone(), r.alignment, Relevance::Relevant)
            });
            cells.insert(
                (&r.canonical_acronym, r.time_point),
                SeriesPoint {
                    lower: r.lower_share,
                    upper: r.upper_share,
                    baseline: r.baseline_share,
                },
            );
        }
        let ordered = order_parties(&parties.into_values().collect::<Vec<_>>());
        let zero = SeriesPoint {
            lower: 0.0,
            upper: 0.0,
            baseline: 0.0,
        };
        let series = ordered
            .into_iter()
            .map(|party| {
                let points = time_points
                    .iter()
                    .map(|t| {
                        cells
                            .get(&(party.canonical_acronym.as_str(), *t))
                            .copied()
                            .unwrap_or(zero)
                    })
                    .collect();
                PartySeries { party, points }
            })
            .collect();
        FigureSpec {
            title: format!("Party visibility in {source} against {body} seats"),
            source: source.to_owned(),
            body: body.to_owned(),
            active_counts: time_points
                .iter()
                .map(|t| active.get(t).copied().unwrap_or(0))
                .collect(),
            time_points,
            series,
            style,
        }
    }

    fn max_share(&self) -> f64 {
        let mut m: f64 = 0.0;
        let mut stacked_base = vec![0.0; self.time_points.len()];
        let mut stacked_top = vec![0.0; self.time_points.len()];
        for s in &self.series {
            for (i, p) in s.points.iter().enumerate() {
                m = m.max(p.upper).max(p.baseline);
                stacked_top[i] = f64::max(stacked_top[i], stacked_base[i] + p.upper);
                stacked_base[i] += p.lower;
            }
        }
        if self.style == RenderStyle::Stacked {
            for v in stacked_top {
                m = m.max(v);
            }
        }
        m
    }
}

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 480.0;

/// Plot area and axis transforms of a figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
    /// Share at the top of the y axis.
    pub y_max: f64,
}

impl Layout {
    pub fn for_spec(spec: &FigureSpec) -> Self {
        let y_max = ((spec.max_share() * 10.0).ceil() / 10.0).clamp(0.1, 1.0);
        Layout {
            left: 60.0,
            right: 640.0,
            top: 50.0,
            bottom: 400.0,
            y_max,
        }
    }

    pub fn y_for_share(&self, share: f64) -> f64 {
        self.bottom - (share / self.y_max) * (self.bottom - self.top)
    }

    pub fn share_for_y(&self, y: f64) -> f64 {
        (self.bottom - y) / (self.bottom - self.top) * self.y_max
    }

    pub fn x_for_index(&self, i: usize, n: usize) -> f64 {
        if n <= 1 {
            return (self.left + self.right) / 2.0;
        }
        self.left + (self.right - self.left) * i as f64 / (n - 1) as f64
    }
}

const PALETTE: [&str; 12] = [
    "#8c1c13", "#d62728", "#e377c2", "#9467bd", "#ff7f0e", "#2ca02c", "#17becf", "#1f77b4",
    "#393b79", "#8c564b", "#7f7f7f", "#bcbd22",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn points_attr(xs: &[f64], ys: impl Iterator<Item = f64>) -> String {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders the figure as a standalone SVG 1.1 document.
pub fn emit_figure_svg(spec: &FigureSpec) -> String {
    let l = Layout::for_spec(spec);
    let n = spec.time_points.len();
    let xs: Vec<f64> = (0..n).map(|i| l.x_for_index(i, n)).collect();
    let mut s = String::new();
    let style = match spec.style {
        RenderStyle::Line => "line",
        RenderStyle::Stacked => "stacked",
    };
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" data-style="{style}" data-plot-top="{:.2}" data-plot-bottom="{:.2}" data-y-max="{:.2}">"#,
        l.top, l.bottom, l.y_max
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text class="title" x="{:.2}" y="25" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        (l.left + l.right) / 2.0,
        escape(&spec.title)
    );

    // Axes and y ticks.
    let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, l.left, l.bottom, l.right, l.bottom);
    let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, l.left, l.top, l.left, l.bottom);
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="y-ticks" font-family="sans-serif" font-size="11" text-anchor="end">"#);
    let steps = (l.y_max * 10.0).round() as usize;
    let stride = if steps > 5 { 2 } else { 1 };
    for k in (0..=steps).step_by(stride) {
        let share = k as f64 / 10.0;
        let y = l.y_for_share(share);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}">{:.0}%</text>"##,
            l.left,
            l.right,
            l.left - 6.0,
            y + 4.0,
            share * 100.0
        );
    }
    let _ = writeln!(s, "</g>");

    // X axis labels and active counts.
    let _ = writeln!(s, r#"<g class="x-ticks" font-family="sans-serif" font-size="11" text-anchor="middle">"#);
    for (i, t) in spec.time_points.iter().enumerate() {
        let _ = writeln!(s, r#"<text class="time-point" x="{:.2}" y="{:.2}">{}</text>"#, xs[i], l.bottom + 18.0, t.date().format("%Y"));
    }
    for (i, c) in spec.active_counts.iter().enumerate() {
        let class = if *c < LOW_SAMPLE_THRESHOLD {
            "active-count low-sample"
        } else {
            "active-count"
        };
        let _ = writeln!(s, r#"<text class="{class}" x="{:.2}" y="{:.2}">{c}</text>"#, xs[i], l.bottom + 36.0);
    }
    let _ = writeln!(s, "</g>");

    if spec.series.is_empty() || n == 0 {
        let _ = writeln!(
            s,
            r#"<text class="no-data" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="16" text-anchor="middle">no data</text>"#,
            (l.left + l.right) / 2.0,
            (l.top + l.bottom) / 2.0
        );
    }

    let mut lower_stack = vec![0.0; n];
    let mut base_stack = vec![0.0; n];
    for (k, ps) in spec.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let name = escape(&ps.party.canonical_acronym);
        let _ = writeln!(
            s,
            r#"<g class="party" data-party="{name}" data-alignment="{}" stroke="{color}" fill="none">"#,
            ps.party.alignment
        );
        match spec.style {
            RenderStyle::Line => {
                let lower = points_attr(&xs, ps.points.iter().map(|p| l.y_for_share(p.lower)));
                let upper = points_attr(&xs, ps.points.iter().map(|p| l.y_for_share(p.upper)));
                let band = format!(
                    "{} {}",
                    upper,
                    points_attr(
                        &xs.iter().rev().copied().collect::<Vec<_>>(),
                        ps.points.iter().rev().map(|p| l.y_for_share(p.lower))
                    )
                );
                let _ = writeln!(s, r#"<polygon class="band" points="{band}" fill="{color}" fill-opacity="0.25" stroke="none"/>"#);
                let _ = writeln!(s, r#"<polyline class="lower" points="{lower}" stroke-width="3"/>"#);
                let _ = writeln!(s, r#"<polyline class="upper" points="{upper}" stroke-width="3"/>"#);
                let base = points_attr(&xs, ps.points.iter().map(|p| l.y_for_share(p.baseline)));
                let _ = writeln!(s, r#"<polyline class="baseline" points="{base}" stroke-width="1"/>"#);
            }
            RenderStyle::Stacked => {
                let bottom: Vec<f64> = lower_stack.clone();
                let top: Vec<f64> = bottom.iter().zip(&ps.points).map(|(b, p)| b + p.lower).collect();
                let area = format!(
                    "{} {}",
                    points_attr(&xs, top.iter().map(|v| l.y_for_share(*v))),
                    points_attr(
                        &xs.iter().rev().copied().collect::<Vec<_>>(),
                        bottom.iter().rev().map(|v| l.y_for_share(*v))
                    )
                );
                let _ = writeln!(s, r#"<polygon class="stack" points="{area}" fill="{color}" fill-opacity="0.5" stroke-width="2"/>"#);
                let upper = points_attr(&xs, bottom.iter().zip(&ps.points).map(|(b, p)| l.y_for_share(b + p.upper)));
                let _ = writeln!(s, r#"<polyline class="upper" points="{upper}" stroke-width="1" stroke-dasharray="4 3"/>"#);
                let base_top: Vec<f64> = base_stack.iter().zip(&ps.points).map(|(b, p)| b + p.baseline).collect();
                let base = points_attr(&xs, base_top.iter().map(|v| l.y_for_share(*v)));
                let _ = writeln!(s, r#"<polyline class="baseline" points="{base}" stroke-width="1"/>"#);
                lower_stack = top;
                base_stack = base_top;
            }
        }
        let _ = writeln!(s, "</g>");
        let ly = l.top + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{name}</text></g>"#,
            l.right + 20.0,
            l.right + 40.0,
            l.right + 46.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
