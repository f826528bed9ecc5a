//! Reference computations that share no code with the library: explicit
//! Wendland formulas and composite Gauss–Legendre quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

use quad_core::{run_study, summarize, StudyConfig, StudyRow, Summary};

pub const NODES_PER_PIECE: usize = 64;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub fn new(m: usize) -> Self {
        let (nodes, weights) = gauss_legendre(m);
        Rule { nodes, weights }
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
    }

    /// Sum of the rule over consecutive pieces of a sorted breakpoint list.
    pub fn integrate_pieces(&self, breaks: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        breaks.windows(2).map(|w| self.integrate(w[0], w[1], &f)).sum()
    }
}

/// Wendland profile of smoothness index `nu` written out term by term.
pub fn phi(nu: usize, t: f64) -> f64 {
    if t >= 1.0 {
        return 0.0;
    }
    let v = 1.0 - t;
    match nu {
        0 => v,
        1 => v.powi(3) * (3.0 * t + 1.0),
        2 => v.powi(5) * (24.0 * t * t + 15.0 * t + 3.0),
        3 => v.powi(7) * (315.0 * t.powi(3) + 285.0 * t * t + 105.0 * t + 15.0),
        _ => panic!("no profile {nu}"),
    }
}

pub fn kernel(r: u8, delta: f64, x: f64, y: f64) -> f64 {
    phi(r as usize - 1, (x - y).abs() / delta)
}

/// `int_0^1 k_r(x, y) dx`, split where the integrand changes polynomial piece.
pub fn kernel_mean(rule: &Rule, r: u8, delta: f64, y: f64) -> f64 {
    let breaks = [(y - delta).max(0.0), y, (y + delta).min(1.0)];
    rule.integrate_pieces(&breaks, |x| kernel(r, delta, x, y))
}

/// Iterated tensor rule for `int_0^1 int_0^1 k_r(x, y) dx dy`; the inner
/// integral is polynomial in `y` between `0, delta, 1 - delta, 1`.
pub fn kernel_double_integral(rule: &Rule, r: u8, delta: f64) -> f64 {
    let mut breaks = vec![0.0, delta, 1.0 - delta, 1.0];
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    rule.integrate_pieces(&breaks, |y| kernel_mean(rule, r, delta, y))
}

pub fn default_study() -> (Vec<StudyRow>, Summary) {
    let rows = run_study(&StudyConfig::default()).expect("default study runs");
    let summary = summarize(&rows);
    (rows, summary)
}
