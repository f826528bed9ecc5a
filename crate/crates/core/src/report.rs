//! Study output files: `rows.csv`, `summary.md` and `plotdata/*.csv`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::design::DesignKind;
use crate::error::{QuadError, Result};
use crate::kernel::Order;
use crate::study::{Prediction, RateFit, RowStatus, StudyRow, Summary};

pub const ROWS_HEADER: &str = "n,design,r,s,wce,fill,sep,abs_w_sum,cond,status";

/// 17 significant digits, enough to round-trip any f64.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn rows_to_csv(rows: &[StudyRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160);
    out.push_str(ROWS_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.n,
            row.design,
            row.r,
            row.s,
            format_f64(row.wce),
            format_f64(row.fill_distance),
            format_f64(row.separation_radius),
            format_f64(row.abs_weight_sum),
            format_f64(row.condition_proxy),
            row.status
        );
    }
    out
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    n: usize,
    design: DesignKind,
    r: i64,
    s: i64,
    wce: f64,
    fill: f64,
    sep: f64,
    abs_w_sum: f64,
    cond: f64,
    status: RowStatus,
}

pub fn rows_from_csv(text: &str) -> Result<Vec<StudyRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| QuadError::Rows(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != ROWS_HEADER {
        return Err(QuadError::Rows(format!("unexpected header '{header}'")));
    }
    reader
        .deserialize::<CsvRow>()
        .map(|rec| {
            let rec = rec.map_err(|e| QuadError::Rows(e.to_string()))?;
            Ok(StudyRow {
                n: rec.n,
                design: rec.design,
                r: Order::new(rec.r)?,
                s: Order::new(rec.s)?,
                wce: rec.wce,
                fill_distance: rec.fill,
                separation_radius: rec.sep,
                abs_weight_sum: rec.abs_w_sum,
                condition_proxy: rec.cond,
                status: rec.status,
            })
        })
        .collect()
}

fn exponent(fit: Option<&RateFit>) -> String {
    fit.map_or_else(|| "n/a".to_string(), |f| format!("{:.3}", f.slope))
}

fn prediction(p: Prediction) -> String {
    match p {
        Prediction::Rate(v) => format!("{v:.3}"),
        Prediction::Void => "void".to_string(),
        Prediction::NotApplicable => "-".to_string(),
    }
}

fn design_title(kind: DesignKind) -> &'static str {
    match kind {
        DesignKind::Uniform => "Uniform design points",
        DesignKind::NonUniform => "Non-uniform design points",
        DesignKind::Custom => "Custom design points",
    }
}

/// Markdown exponent tables, one section per design and construction order.
pub fn render_summary(summary: &Summary) -> String {
    let mut out = String::new();
    out.push_str("# Empirical convergence exponents\n\n");
    out.push_str(
        "Fitted columns are least-squares slopes of log(value) against log(n): \
         a quantity behaving like O(n^slope). Predicted columns are decay \
         exponents p for an error O(n^-p), so agreement means slope = -p. \
         The misspecified prediction uses the fitted fill-distance exponent \
         alpha and quasi-uniformity exponent delta = alpha / a; `void` marks \
         delta <= 1 - s/r. Worst-case error fits use rows with status ok only.\n",
    );
    let mut current: Option<DesignKind> = None;
    for series in &summary.series {
        if current != Some(series.design) {
            let _ = write!(out, "\n## {}\n", design_title(series.design));
            current = Some(series.design);
        }
        let _ = write!(
            out,
            "\n### {} r = {}\n\nh = O(n^{}), q = O(n^{}), sum|w_i| = O(n^{}); alpha = {}, delta = {}\n\n",
            series.design,
            series.r,
            exponent(series.fill.as_ref()),
            exponent(series.separation.as_ref()),
            exponent(series.abs_weight_sum.as_ref()),
            series.alpha.map_or("n/a".into(), |a| format!("{a:.3}")),
            series.delta.map_or("n/a".into(), |d| format!("{d:.3}")),
        );
        out.push_str("| s | fitted slope | residual rms | points | predicted p (well-specified, s = r) | predicted p (misspecified) |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for w in &series.wce {
            let well = if w.s == series.r {
                prediction(series.wellspecified)
            } else {
                "-".to_string()
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                w.s,
                exponent(w.fit.as_ref()),
                w.fit.map_or("n/a".into(), |f| format!("{:.3}", f.residual_rms)),
                w.fit.map_or(0, |f| f.points_used),
                well,
                prediction(w.misspecified),
            );
        }
    }
    out
}

/// One log-log series file per `(design, r)`: geometry, weight sum and the
/// usable worst-case errors for every evaluation order.
pub fn plot_tables(rows: &[StudyRow]) -> Vec<(String, String)> {
    use std::collections::BTreeMap;
    let mut panels: BTreeMap<(DesignKind, Order), BTreeMap<usize, Vec<&StudyRow>>> = BTreeMap::new();
    let mut orders_s: Vec<Order> = rows.iter().map(|r| r.s).collect();
    orders_s.sort();
    orders_s.dedup();
    for row in rows {
        panels
            .entry((row.design, row.r))
            .or_default()
            .entry(row.n)
            .or_default()
            .push(row);
    }
    panels
        .into_iter()
        .map(|((design, r), by_n)| {
            let mut text = String::from("n,fill,sep,abs_w_sum");
            for s in &orders_s {
                let _ = write!(text, ",wce_s{s}");
            }
            text.push('\n');
            for (n, cells) in by_n {
                let first = cells[0];
                let _ = write!(
                    text,
                    "{n},{},{},{}",
                    format_f64(first.fill_distance),
                    format_f64(first.separation_radius),
                    format_f64(first.abs_weight_sum)
                );
                for s in &orders_s {
                    let value = cells
                        .iter()
                        .find(|c| c.s == *s && c.status == RowStatus::Ok)
                        .map_or(String::new(), |c| format_f64(c.wce));
                    let _ = write!(text, ",{value}");
                }
                text.push('\n');
            }
            (format!("{design}_r{r}.csv"), text)
        })
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| QuadError::io(path, e))
}

/// Writes `rows.csv`, `summary.md` and `plotdata/` under `out_dir`.
pub fn write_study_outputs(out_dir: &Path, rows: &[StudyRow], summary: &Summary) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| QuadError::io(out_dir, e))?;
    write_file(&out_dir.join("rows.csv"), &rows_to_csv(rows))?;
    write_file(&out_dir.join("summary.md"), &render_summary(summary))?;
    let plot_dir = out_dir.join("plotdata");
    fs::create_dir_all(&plot_dir).map_err(|e| QuadError::io(&plot_dir, e))?;
    for (name, text) in plot_tables(rows) {
        write_file(&plot_dir.join(name), &text)?;
    }
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<StudyRow>> {
    let text = fs::read_to_string(path).map_err(|e| QuadError::io(path, e))?;
    rows_from_csv(&text)
}
