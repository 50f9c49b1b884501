//! Minimal self-contained SVG line charts.

use std::fmt::Write as _;
use std::path::Path;

use super::{write_file, HarnessError};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Renders one polyline per series against the shared `xs`.
///
/// Every series must have `xs.len()` points; `xs` must not be empty.
pub fn render_line_chart(title: &str, x_label: &str, xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    assert!(!xs.is_empty(), "chart needs at least one point");
    let (x_min, x_max) = span(xs.iter().copied());
    let (y_lo, y_max) = span(series.iter().flat_map(|(_, ys)| ys.iter().copied()));
    let y_min = y_lo.min(0.0);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN_LEFT, MARGIN_LEFT + plot_w, MARGIN_TOP, MARGIN_TOP + plot_h);
    let _ = writeln!(
        svg,
        r#"<path d="M {left} {top} L {left} {bottom} L {right} {bottom}" fill="none" stroke="black"/>"#
    );
    let label = |svg: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            escape(text)
        );
    };
    label(&mut svg, left, bottom + 18.0, "middle", &format!("{x_min}"));
    label(&mut svg, right, bottom + 18.0, "middle", &format!("{x_max}"));
    label(&mut svg, (left + right) / 2.0, bottom + 38.0, "middle", x_label);
    label(&mut svg, left - 6.0, bottom + 4.0, "end", &format!("{y_min:.1}"));
    label(&mut svg, left - 6.0, top + 4.0, "end", &format!("{y_max:.1}"));

    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(name),
            points.join(" ")
        );
        let legend_y = top + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{legend_y:.2}" x2="{}" y2="{legend_y:.2}" stroke="{color}" stroke-width="2"/>"#,
            right + 12.0,
            right + 32.0
        );
        label(&mut svg, right + 38.0, legend_y + 4.0, "start", name);
    }
    svg.push_str("</svg>\n");
    svg
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(path: &Path) -> Result<Table, HarnessError> {
    let csv_err = |message: String| HarnessError::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => HarnessError::Read {
            path: path.to_path_buf(),
            source,
        },
        other => csv_err(format!("{other:?}")),
    })?;
    let header = reader
        .headers()
        .map_err(|e| csv_err(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| csv_err(e.to_string()))?;
    Ok(Table { header, rows })
}

/// Plots `columns` of a CSV against `x_column` (default: the first column).
/// Nothing is written if a column is missing, a cell is not numeric or
/// there are no data rows.
pub fn emit_line_chart(
    csv_path: &Path,
    columns: &[String],
    x_column: Option<&str>,
    out_path: &Path,
) -> Result<(), HarnessError> {
    let table = read_table(csv_path)?;
    let index_of = |name: &str| {
        table
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::MissingColumn {
                path: csv_path.to_path_buf(),
                column: name.to_string(),
            })
    };
    let x_index = match x_column {
        Some(name) => index_of(name)?,
        None => 0,
    };
    let x_name = table.header.get(x_index).cloned().unwrap_or_default();
    let indices = columns.iter().map(|c| index_of(c)).collect::<Result<Vec<_>, _>>()?;
    if table.rows.is_empty() {
        return Err(HarnessError::EmptyData {
            path: csv_path.to_path_buf(),
        });
    }
    let numeric = |row: usize, col: usize| -> Result<f64, HarnessError> {
        let cell = table.rows[row].get(col).map(String::as_str).unwrap_or("");
        cell.trim().parse().map_err(|_| HarnessError::Csv {
            path: csv_path.to_path_buf(),
            message: format!("row {}: `{cell}` is not a number", row + 1),
        })
    };
    let xs = (0..table.rows.len())
        .map(|r| numeric(r, x_index))
        .collect::<Result<Vec<_>, _>>()?;
    let series = columns
        .iter()
        .zip(&indices)
        .map(|(name, &col)| {
            let ys = (0..table.rows.len())
                .map(|r| numeric(r, col))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((name.clone(), ys))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let title = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_file(out_path, &render_line_chart(&title, &x_name, &xs, &series))
}
