//! File formats: CSV matrices in and CSV/JSON/SVG summaries out.
//!
//! Matrix CSV: one agent per line, comma-separated values, lines starting
//! with `#` are comments. Floats are written with Rust's shortest
//! round-trip formatting, so write-then-read reproduces a matrix bit for
//! bit. Appraisal matrices use the integers `-1`, `0`, `1`.
//!
//! All writers emit byte-deterministic output for a given input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dynamics::{
    validate_initial, AppraisalMatrix, DynamicsError, OpinionMatrix, ValidationReport,
};
use crate::montecarlo::CellSummary;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot {action} {path}: {source}")]
    File {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected {expected} values, found {found}")]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}: column {column}: cannot parse {text:?} as a finite number")]
    BadNumber {
        path: PathBuf,
        line: usize,
        column: usize,
        text: String,
    },
    #[error("{path}:{line}: blank line would be a zero row (agent with no opinions)")]
    BlankRow { path: PathBuf, line: usize },
    #[error("{path}: no data rows")]
    EmptyFile { path: PathBuf },
    #[error("{path}: {source}")]
    InvalidMatrix {
        path: PathBuf,
        #[source]
        source: DynamicsError,
    },
    #[error("refusing to write an empty result set")]
    NoResults,
    #[error("cannot infer an output format from {path} (expected .csv, .json or .svg)")]
    UnknownFormat { path: PathBuf },
}

impl IoError {
    /// Is this a filesystem problem (as opposed to malformed content)?
    pub fn is_file_error(&self) -> bool {
        matches!(self, IoError::File { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl OutputFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            "svg" => Some(OutputFormat::Svg),
            _ => None,
        }
    }
}

/// Shortest decimal form that parses back to the same bits.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn split_data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| !line.trim_start().starts_with('#'))
}

/// Read an opinion matrix and its zero-row/zero-column report. Policy on a
/// rejected report is the caller's: the CLI treats zero rows as fatal and
/// zero columns as fatal-unless-allowed.
pub fn read_opinion_csv(path: &Path) -> Result<(OpinionMatrix, ValidationReport), IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        action: "read",
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected = None;
    for (line_no, line) in split_data_lines(&text) {
        if line.trim().is_empty() {
            return Err(IoError::BlankRow {
                path: path.to_path_buf(),
                line: line_no,
            });
        }
        let mut row = Vec::new();
        for (col, cell) in line.split(',').enumerate() {
            let text = cell.trim();
            let value: f64 = text.parse().map_err(|_| IoError::BadNumber {
                path: path.to_path_buf(),
                line: line_no,
                column: col + 1,
                text: text.to_string(),
            })?;
            if !value.is_finite() {
                return Err(IoError::BadNumber {
                    path: path.to_path_buf(),
                    line: line_no,
                    column: col + 1,
                    text: text.to_string(),
                });
            }
            row.push(value);
        }
        let width = *expected.get_or_insert(row.len());
        if row.len() != width {
            return Err(IoError::RaggedRow {
                path: path.to_path_buf(),
                line: line_no,
                expected: width,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let matrix = OpinionMatrix::from_rows(&rows).map_err(|source| IoError::InvalidMatrix {
        path: path.to_path_buf(),
        source,
    })?;
    let report = validate_initial(&matrix);
    Ok((matrix, report))
}

/// Read an appraisal sign matrix (entries `-1`, `0`, `1`; must be square,
/// symmetric, with unit diagonal).
pub fn read_appraisal_csv(path: &Path) -> Result<AppraisalMatrix, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        action: "read",
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows: Vec<Vec<i8>> = Vec::new();
    for (line_no, line) in split_data_lines(&text) {
        if line.trim().is_empty() {
            return Err(IoError::BlankRow {
                path: path.to_path_buf(),
                line: line_no,
            });
        }
        let mut row = Vec::new();
        for (col, cell) in line.split(',').enumerate() {
            let text = cell.trim();
            let value: i8 = text.parse().map_err(|_| IoError::BadNumber {
                path: path.to_path_buf(),
                line: line_no,
                column: col + 1,
                text: text.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    AppraisalMatrix::from_rows(&rows).map_err(|source| IoError::InvalidMatrix {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_opinion_csv(path: &Path, y: &OpinionMatrix) -> Result<(), IoError> {
    let mut out = format!("# {} agents x {} topics\n", y.n_agents(), y.n_topics());
    for row in y.rows() {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| IoError::File {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_appraisal_csv(path: &Path, x: &AppraisalMatrix) -> Result<(), IoError> {
    let mut out = String::new();
    for row in x.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| IoError::File {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

/// Render sweep summaries in the requested format. Refuses an empty result
/// set without touching the filesystem.
pub fn write_outputs(
    cells: &[CellSummary],
    format: OutputFormat,
    path: &Path,
) -> Result<(), IoError> {
    if cells.is_empty() {
        return Err(IoError::NoResults);
    }
    let bytes = match format {
        OutputFormat::Csv => summary_csv(cells).into_bytes(),
        OutputFormat::Json => {
            let mut buf = serde_json::to_vec_pretty(cells).expect("summaries serialize");
            buf.push(b'\n');
            buf
        }
        OutputFormat::Svg => summary_svg(cells).into_bytes(),
    };
    let mut file = fs::File::create(path).map_err(|source| IoError::File {
        action: "create",
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(&bytes).map_err(|source| IoError::File {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

pub const SUMMARY_CSV_HEADER: &str =
    "n_agents,n_topics,trials,balanced,vanished,budget_exceeded,p_hat,mean_hitting_time";

/// Sweep summaries as CSV text (header plus one line per cell).
pub fn summary_csv(cells: &[CellSummary]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for cell in cells {
        let mean = match cell.mean_hitting_time {
            Some(v) => fmt_f64(v),
            None => "NaN".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            cell.n_agents,
            cell.n_topics,
            cell.trials_run,
            cell.balanced_count,
            cell.vanished_count,
            cell.budget_exceeded_count,
            fmt_f64(cell.estimated_probability),
            mean,
        );
    }
    out
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 140.0; // room for the legend
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Mean hitting time against topic count, one polyline per agent count.
/// Pure text assembly with fixed-precision coordinates: byte-deterministic.
fn summary_svg(cells: &[CellSummary]) -> String {
    // Group by agent count, preserving first-seen order.
    let mut groups: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
    for cell in cells {
        let Some(mean) = cell.mean_hitting_time else {
            continue;
        };
        match groups.iter_mut().find(|(n, _)| *n == cell.n_agents) {
            Some((_, points)) => points.push((cell.n_topics, mean)),
            None => groups.push((cell.n_agents, vec![(cell.n_topics, mean)])),
        }
    }

    let xs: Vec<usize> = groups
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
        .collect();
    let x_min = xs.iter().copied().min().unwrap_or(1) as f64;
    let x_max = xs.iter().copied().max().unwrap_or(1) as f64;
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_max = groups
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
        .fold(1.0f64, f64::max);

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_pos = |m: f64| MARGIN_LEFT + (m - x_min) / x_span * plot_w;
    let y_pos = |v: f64| MARGIN_TOP + plot_h - v / y_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    );

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{MARGIN_TOP:.2}" stroke="black"/>"#
    );

    // X ticks at the distinct topic counts actually present.
    let mut tick_ms: Vec<usize> = xs.clone();
    tick_ms.sort_unstable();
    tick_ms.dedup();
    for &m in &tick_ms {
        let x = x_pos(m as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{m}</text>"#,
            y0 + 16.0
        );
    }
    // Five y ticks including 0 and the max.
    for k in 0..=4 {
        let v = y_max * f64::from(k) / 4.0;
        let y = y_pos(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{v:.2}</text>"#,
            x0 - 7.0,
            y + 3.5
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">topics (m)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">mean hitting time</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // One polyline per agent count, plus a legend entry.
    for (idx, (n_agents, points)) in groups.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let coords: Vec<String> = points
            .iter()
            .map(|&(m, v)| format!("{:.2},{:.2}", x_pos(m as f64), y_pos(v)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let legend_y = MARGIN_TOP + 14.0 + 18.0 * idx as f64;
        let legend_x = MARGIN_LEFT + plot_w + 14.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{legend_x:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            legend_x + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">N = {n_agents}</text>"#,
            legend_x + 26.0,
            legend_y + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
