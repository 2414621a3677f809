//! CSV tables and bare-bones SVG line plots.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub plot: Plot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: &'static str,
    pub x: usize,
    pub ys: Vec<usize>,
    /// Column whose distinct values split each y column into separate series.
    pub group_by: Option<usize>,
    pub log_x: bool,
    pub log_y: bool,
}

/// Shortest decimal that parses back to the same `f64`. Plain notation in
/// `[1e-5, 1e16)`, exponent notation outside it.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        Axis { lo, hi, log }
    }

    /// Position in `[0, 1]`, or `None` for values the axis cannot show.
    fn unit(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v > 0.0 {
                v.log10()
            } else {
                return None;
            }
        } else {
            v
        };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    fn label(&self, u: f64) -> String {
        let v = self.lo + u * (self.hi - self.lo);
        let v = if self.log { 10f64.powf(v) } else { v };
        format!("{v:.3e}")
    }
}

pub fn render_svg(table: &Table) -> String {
    let plot = &table.plot;
    let x_axis = Axis::fit(table.rows.iter().map(|r| r[plot.x]), plot.log_x);
    let y_axis = Axis::fit(
        table
            .rows
            .iter()
            .flat_map(|r| plot.ys.iter().map(move |&c| r[c])),
        plot.log_y,
    );
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let to_px = |x: f64, y: f64| -> Option<(f64, f64)> {
        Some((
            MARGIN + x_axis.unit(x)? * pw,
            HEIGHT - MARGIN - y_axis.unit(y)? * ph,
        ))
    };

    let mut groups: Vec<f64> = Vec::new();
    if let Some(g) = plot.group_by {
        for r in &table.rows {
            if !groups.contains(&r[g]) {
                groups.push(r[g]);
            }
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        plot.title
    );
    for i in 0..=4 {
        let u = i as f64 / 4.0;
        let (x, y) = (MARGIN + u * pw, HEIGHT - MARGIN - u * ph);
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN + 16.0,
            x_axis.label(u)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
            MARGIN - 4.0,
            y_axis.label(u)
        );
    }
    let log_tag = |log: bool| if log { " (log)" } else { "" };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        table.columns[plot.x],
        log_tag(plot.log_x)
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">value{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        log_tag(plot.log_y)
    );

    let mut series = 0;
    for &yc in &plot.ys {
        let group_values: Vec<Option<f64>> = if groups.is_empty() {
            vec![None]
        } else {
            groups.iter().copied().map(Some).collect()
        };
        for gv in group_values {
            let points: Vec<String> = table
                .rows
                .iter()
                .filter(|r| gv.is_none_or(|g| plot.group_by.is_some_and(|gc| r[gc] == g)))
                .filter_map(|r| to_px(r[plot.x], r[yc]))
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect();
            let color = COLORS[series % COLORS.len()];
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                points.join(" ")
            );
            let name = match (gv, plot.group_by) {
                (Some(g), Some(gc)) => format!(
                    "{} ({}={})",
                    table.columns[yc],
                    table.columns[gc],
                    format_number(g)
                ),
                _ => table.columns[yc].to_owned(),
            };
            let ly = MARGIN + 14.0 + 14.0 * series as f64;
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{ly}" fill="{color}">{name}</text>"#,
                MARGIN + 8.0
            );
            series += 1;
        }
    }
    svg.push_str("</svg>\n");
    svg
}
