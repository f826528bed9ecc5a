//! Sweep over design size, construction order and evaluation order, plus
//! log-log rate fitting of the resulting error curves.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{DesignKind, DesignSet};
use crate::error::{QuadError, Result};
use crate::kernel::{Order, DEFAULT_SCALE};
use crate::quadrature::{abs_weight_sum, bq_weights, worst_case_error, QuadratureRule};
use crate::rates::{rate_bq_misspecified, rate_bq_wellspecified};

/// Roughly sqrt(2)-geometric grid from 16 to 1024.
pub const DEFAULT_N_GRID: [usize; 13] = [16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512, 724, 1024];
pub const DEFAULT_WCE_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub n_grid: Vec<usize>,
    pub orders_r: Vec<Order>,
    pub orders_s: Vec<Order>,
    pub designs: Vec<DesignKind>,
    pub scale: f64,
    pub wce_floor: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            n_grid: DEFAULT_N_GRID.to_vec(),
            orders_r: Order::ALL.to_vec(),
            orders_s: Order::ALL.to_vec(),
            designs: vec![DesignKind::Uniform, DesignKind::NonUniform],
            scale: DEFAULT_SCALE,
            wce_floor: DEFAULT_WCE_FLOOR,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(QuadError::Config { line: 0, message: msg });
        if self.n_grid.is_empty() {
            return invalid("n_grid is empty".into());
        }
        if self.n_grid[0] < 8 {
            return invalid(format!("n_grid must start at 8 or more, got {}", self.n_grid[0]));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("n_grid must be strictly increasing".into());
        }
        if self.orders_r.is_empty() || self.orders_s.is_empty() {
            return invalid("orders_r and orders_s must be nonempty".into());
        }
        if self.designs.is_empty() {
            return invalid("designs must be nonempty".into());
        }
        if self.designs.contains(&DesignKind::Custom) {
            return invalid("studies run on uniform and nonuniform designs only".into());
        }
        if !(self.scale > 0.0 && self.scale <= 0.5) {
            return invalid(format!("delta must lie in (0, 0.5], got {}", self.scale));
        }
        if !(self.wce_floor >= 0.0) {
            return invalid(format!("wce_floor must be nonnegative, got {}", self.wce_floor));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowStatus {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "clamped")]
    Clamped,
    #[serde(rename = "skipped-floor")]
    SkippedFloor,
    #[serde(rename = "solve-failed")]
    SolveFailed,
}

impl RowStatus {
    pub fn label(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Clamped => "clamped",
            RowStatus::SkippedFloor => "skipped-floor",
            RowStatus::SolveFailed => "solve-failed",
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RowStatus {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(RowStatus::Ok),
            "clamped" => Ok(RowStatus::Clamped),
            "skipped-floor" => Ok(RowStatus::SkippedFloor),
            "solve-failed" => Ok(RowStatus::SolveFailed),
            other => Err(QuadError::Rows(format!("unknown status '{other}'"))),
        }
    }
}

/// One measured cell of the sweep. Fields that could not be computed are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub design: DesignKind,
    pub r: Order,
    pub s: Order,
    pub wce: f64,
    pub fill_distance: f64,
    pub separation_radius: f64,
    pub abs_weight_sum: f64,
    pub condition_proxy: f64,
    pub status: RowStatus,
}

fn evaluate_cell(cfg: &StudyConfig, kind: DesignKind, n: usize, r: Order) -> Vec<StudyRow> {
    let base = |s: Order, design: Option<&DesignSet>| StudyRow {
        n,
        design: kind,
        r,
        s,
        wce: f64::NAN,
        fill_distance: design.map_or(f64::NAN, DesignSet::fill_distance),
        separation_radius: design.map_or(f64::NAN, DesignSet::separation_radius),
        abs_weight_sum: f64::NAN,
        condition_proxy: f64::NAN,
        status: RowStatus::SolveFailed,
    };
    let design = match DesignSet::generate(kind, n) {
        Ok(d) => d,
        Err(_) => return cfg.orders_s.iter().map(|&s| base(s, None)).collect(),
    };
    let rule = match bq_weights(r, cfg.scale, &design) {
        Ok(rule) => rule,
        Err(_) => return cfg.orders_s.iter().map(|&s| base(s, Some(&design))).collect(),
    };
    cfg.orders_s
        .iter()
        .map(|&s| measure(cfg, &rule, base(s, Some(&design))))
        .collect()
}

fn measure(cfg: &StudyConfig, rule: &QuadratureRule, mut row: StudyRow) -> StudyRow {
    row.abs_weight_sum = abs_weight_sum(rule);
    row.condition_proxy = rule.condition_proxy().unwrap_or(f64::NAN);
    row.status = match worst_case_error(rule, row.s) {
        Err(_) => RowStatus::SkippedFloor,
        Ok(report) => {
            row.wce = report.wce;
            if report.clamped() {
                RowStatus::Clamped
            } else if !report.resolved() || report.wce < cfg.wce_floor {
                RowStatus::SkippedFloor
            } else {
                RowStatus::Ok
            }
        }
    };
    row
}

/// Marks cells whose error, extrapolated from the previous two usable cells of
/// the same series, would fall below the floor.
fn apply_predicted_floor(cfg: &StudyConfig, rows: &mut [StudyRow]) {
    let mut series: BTreeMap<(DesignKind, Order, Order), Vec<usize>> = BTreeMap::new();
    for (idx, row) in rows.iter().enumerate() {
        series.entry((row.design, row.r, row.s)).or_default().push(idx);
    }
    for indices in series.values() {
        let mut last_two: Vec<(f64, f64)> = Vec::new();
        for &idx in indices {
            let row = &mut rows[idx];
            if let [(n0, e0), (n1, e1)] = last_two[..] {
                let slope = (e1.ln() - e0.ln()) / (n1.ln() - n0.ln());
                let predicted = (e1.ln() + slope * ((row.n as f64).ln() - n1.ln())).exp();
                if predicted < cfg.wce_floor && row.status == RowStatus::Ok {
                    row.status = RowStatus::SkippedFloor;
                }
            }
            if row.status == RowStatus::Ok {
                last_two.push((row.n as f64, row.wce));
                if last_two.len() > 2 {
                    last_two.remove(0);
                }
            }
        }
    }
}

/// Runs the sweep on the current rayon pool. Rows are ordered by
/// `(design, n, r, s)` following the configuration lists.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    cfg.validate()?;
    let cells: Vec<(DesignKind, usize, Order)> = cfg
        .designs
        .iter()
        .flat_map(|&kind| {
            cfg.n_grid
                .iter()
                .flat_map(move |&n| cfg.orders_r.iter().map(move |&r| (kind, n, r)))
        })
        .collect();
    let mut rows: Vec<StudyRow> = cells
        .par_iter()
        .map(|&(kind, n, r)| evaluate_cell(cfg, kind, n, r))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    apply_predicted_floor(cfg, &mut rows);
    Ok(rows)
}

/// Least-squares line through `(ln n, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points_used: usize,
}

/// Fits `ln value = intercept + slope ln n` over the pairs with positive,
/// finite entries.
pub fn fit_rate(pairs: &[(f64, f64)]) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(n, v)| *n > 0.0 && *v > 0.0 && n.is_finite() && v.is_finite())
        .map(|(n, v)| (n.ln(), v.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(QuadError::FitUnavailable { usable: pts.len() });
    }
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(QuadError::FitUnavailable { usable: 1 });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(RateFit {
        slope,
        intercept,
        residual_rms: (sse / m).sqrt(),
        points_used: pts.len(),
    })
}

/// A theory column entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    /// Decay exponent `p` in `O(n^-p)`.
    Rate(f64),
    /// The rate's hypotheses fail, e.g. `delta <= 1 - s/r`.
    Void,
    /// `s > r` or the geometry fits were unavailable.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WceSummary {
    pub s: Order,
    pub fit: Option<RateFit>,
    pub misspecified: Prediction,
}

/// Fitted exponents for one figure panel: one design and one construction order.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSummary {
    pub design: DesignKind,
    pub r: Order,
    pub fill: Option<RateFit>,
    pub separation: Option<RateFit>,
    pub abs_weight_sum: Option<RateFit>,
    /// Fitted fill-distance exponent, capped at `1/d`.
    pub alpha: Option<f64>,
    /// Fitted quasi-uniformity exponent `alpha / a`, capped at 1.
    pub delta: Option<f64>,
    pub wellspecified: Prediction,
    pub wce: Vec<WceSummary>,
}

impl SeriesSummary {
    pub fn wce_fit(&self, s: Order) -> Option<&RateFit> {
        self.wce.iter().find(|w| w.s == s).and_then(|w| w.fit.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub series: Vec<SeriesSummary>,
}

impl Summary {
    pub fn get(&self, design: DesignKind, r: Order) -> Option<&SeriesSummary> {
        self.series.iter().find(|s| s.design == design && s.r == r)
    }
}

/// Per `(design, r)`: fitted exponents of the geometry, the absolute weight
/// sum and the worst-case error for every `s`, alongside predicted rates.
pub fn summarize(rows: &[StudyRow]) -> Summary {
    let mut groups: BTreeMap<(DesignKind, Order), Vec<&StudyRow>> = BTreeMap::new();
    for row in rows {
        groups.entry((row.design, row.r)).or_default().push(row);
    }
    let series = groups
        .into_iter()
        .map(|((design, r), rows)| summarize_series(design, r, &rows))
        .collect();
    Summary { series }
}

fn summarize_series(design: DesignKind, r: Order, rows: &[&StudyRow]) -> SeriesSummary {
    // one geometry sample per n
    let mut per_n: BTreeMap<usize, &StudyRow> = BTreeMap::new();
    for row in rows {
        per_n.entry(row.n).or_insert(row);
    }
    let series_of = |f: &dyn Fn(&StudyRow) -> f64| -> Vec<(f64, f64)> {
        per_n.values().map(|row| (row.n as f64, f(row))).collect()
    };
    let fill = fit_rate(&series_of(&|row| row.fill_distance)).ok();
    let separation = fit_rate(&series_of(&|row| row.separation_radius)).ok();
    let abs_weight_sum = fit_rate(
        &per_n
            .values()
            .filter(|row| row.status != RowStatus::SolveFailed)
            .map(|row| (row.n as f64, row.abs_weight_sum))
            .collect::<Vec<_>>(),
    )
    .ok();

    let alpha = fill.map(|f| (-f.slope).min(1.0)).filter(|a| *a > 0.0);
    let delta = match (alpha, separation) {
        (Some(al), Some(sep)) if sep.slope < 0.0 => Some((al / -sep.slope).min(1.0)),
        _ => None,
    };
    let rf = f64::from(r.get());
    let wellspecified = match alpha {
        Some(al) => rate_bq_wellspecified(al, rf, 1).map_or(Prediction::Void, Prediction::Rate),
        None => Prediction::NotApplicable,
    };

    let mut orders_s: Vec<Order> = rows.iter().map(|row| row.s).collect();
    orders_s.sort();
    orders_s.dedup();
    let wce = orders_s
        .into_iter()
        .map(|s| {
            let pairs: Vec<(f64, f64)> = rows
                .iter()
                .filter(|row| row.s == s && row.status == RowStatus::Ok)
                .map(|row| (row.n as f64, row.wce))
                .collect();
            let misspecified = match (alpha, delta) {
                (Some(al), Some(de)) if s <= r => {
                    match rate_bq_misspecified(al, de, rf, f64::from(s.get())) {
                        Ok(p) => Prediction::Rate(p),
                        Err(QuadError::GuaranteeVoid(_)) => Prediction::Void,
                        Err(_) => Prediction::NotApplicable,
                    }
                }
                _ => Prediction::NotApplicable,
            };
            WceSummary {
                s,
                fit: fit_rate(&pairs).ok(),
                misspecified,
            }
        })
        .collect();

    SeriesSummary {
        design,
        r,
        fill,
        separation,
        abs_weight_sum,
        alpha,
        delta,
        wellspecified,
        wce,
    }
}
