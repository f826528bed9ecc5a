//! Bayesian-quadrature weights and worst-case errors, including evaluation
//! of a rule under a kernel other than the one it was built with.
//!
//! For a rule `(w_i, X_i)` and kernel `k`, the squared worst-case error over
//! the unit ball of the RKHS under the uniform measure on `[0, 1]` is
//!
//! ```text
//! e^2 = int int k dP dP - 2 sum_i w_i m(X_i) + sum_ij w_i w_j k(X_i, X_j)
//! ```
//!
//! where `m` is the kernel mean. Bayesian quadrature minimises this for fixed
//! points by solving `K w = z` with `z_i = m(X_i)`.

use crate::design::DesignSet;
use crate::error::{QuadError, Result};
use crate::kernel::{Order, WendlandKernel};
use crate::linalg::{cholesky_factor, condition_diagnostic, SymMatrix};

/// Relative residual `|K w - z|_inf / |z|_inf` a weight solve must meet.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-8;

/// Squared errors in `[-CLAMP_TOL * first_term, 0)` are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-8;

/// Multiple of machine epsilon times the magnitude of the three terms of
/// `e^2` below which the computed value is indistinguishable from rounding.
pub const ROUNDOFF_FACTOR: f64 = 64.0;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Gram matrix `(k(X_i, X_j))` of a kernel on a design.
pub fn gram_matrix(kernel: &WendlandKernel, design: &DesignSet) -> SymMatrix {
    let x = design.points();
    SymMatrix::from_fn(x.len(), |i, j| kernel.eval(x[i], x[j])).expect("designs are nonempty")
}

/// Kernel-mean vector `z_i = m(X_i)`.
pub fn kernel_mean_vector(kernel: &WendlandKernel, design: &DesignSet) -> Result<Vec<f64>> {
    design.points().iter().map(|&x| kernel.mean_uniform01(x)).collect()
}

/// Options for the weight solve. The default is the plain `K^-1 z` solve.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveOptions {
    /// Added to the Gram diagonal before factoring. Exploratory use only.
    pub jitter: f64,
}

/// Weighted points together with the kernel they were built for.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    design: DesignSet,
    weights: Vec<f64>,
    construction_order: Order,
    scale: f64,
    condition_proxy: Option<f64>,
}

impl QuadratureRule {
    /// A rule with caller-chosen weights, e.g. equal weights.
    pub fn with_weights(design: DesignSet, weights: Vec<f64>, order: Order, scale: f64) -> Result<Self> {
        if weights.len() != design.len() {
            return Err(QuadError::DimensionMismatch {
                expected: design.len(),
                actual: weights.len(),
            });
        }
        WendlandKernel::new(order, scale)?;
        Ok(QuadratureRule {
            design,
            weights,
            construction_order: order,
            scale,
            condition_proxy: None,
        })
    }

    pub fn design(&self) -> &DesignSet {
        &self.design
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn construction_order(&self) -> Order {
        self.construction_order
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Condition proxy of the Gram factor; `None` for rules not built by a
    /// solve.
    pub fn condition_proxy(&self) -> Option<f64> {
        self.condition_proxy
    }

    pub fn kernel(&self) -> WendlandKernel {
        WendlandKernel::new(self.construction_order, self.scale).expect("scale validated at construction")
    }

    /// Replaces the weights, keeping design and kernel.
    pub fn perturbed(&self, weights: Vec<f64>) -> Result<QuadratureRule> {
        let mut out = QuadratureRule::with_weights(
            self.design.clone(),
            weights,
            self.construction_order,
            self.scale,
        )?;
        out.condition_proxy = self.condition_proxy;
        Ok(out)
    }
}

pub fn bq_weights(order: Order, scale: f64, design: &DesignSet) -> Result<QuadratureRule> {
    bq_weights_with(order, scale, design, SolveOptions::default())
}

/// Bayesian-quadrature weights `w = K^-1 z` for the order-`r` Wendland kernel.
pub fn bq_weights_with(
    order: Order,
    scale: f64,
    design: &DesignSet,
    options: SolveOptions,
) -> Result<QuadratureRule> {
    let kernel = WendlandKernel::new(order, scale)?;
    let z = kernel_mean_vector(&kernel, design)?;
    let mut gram = gram_matrix(&kernel, design);
    if options.jitter != 0.0 {
        gram = gram.shifted(options.jitter);
    }
    let context = |source: QuadError| QuadError::WeightSolve {
        r: order.get(),
        n: design.len(),
        design: design.kind().to_string(),
        source: Box::new(source),
    };
    let factor = cholesky_factor(&gram).map_err(context)?;
    let weights = factor.solve(&z).map_err(context)?;

    let kw = gram.mul_vec(&weights)?;
    let residual = kw.iter().zip(&z).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let z_max = z.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if !(residual <= SOLVE_RESIDUAL_TOL * z_max) {
        return Err(context(QuadError::Domain(format!(
            "solve residual {residual:e} exceeds {SOLVE_RESIDUAL_TOL:e} x |z|_inf"
        ))));
    }

    Ok(QuadratureRule {
        design: design.clone(),
        weights,
        construction_order: order,
        scale,
        condition_proxy: Some(condition_diagnostic(&factor)),
    })
}

/// Worst-case error of a rule in the RKHS of one Wendland kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCaseReport {
    /// `sqrt(max(raw_square, 0))`.
    pub wce: f64,
    /// Computed `e^2` before clamping.
    pub raw_square: f64,
    pub eval_order: Order,
    /// Condition proxy of the construction solve, NaN if the rule had none.
    pub condition_proxy: f64,
    /// `int int k dP dP` under the evaluation kernel.
    pub first_term: f64,
    /// Rounding level of the three-term sum; see [`ROUNDOFF_FACTOR`].
    pub roundoff_bound: f64,
}

impl WorstCaseReport {
    pub fn clamped(&self) -> bool {
        self.raw_square < 0.0
    }

    /// False when `e^2` is at or below the rounding level of its terms.
    pub fn resolved(&self) -> bool {
        self.raw_square > self.roundoff_bound
    }
}

fn cross_term(kernel: &WendlandKernel, rule: &QuadratureRule) -> CompensatedSum {
    let mut acc = CompensatedSum::default();
    for (&w, &x) in rule.weights.iter().zip(rule.design.points()) {
        acc.add(w * kernel.mean_unchecked(x));
    }
    acc
}

/// `w^T K w` using the sorted points and compact support of the kernel.
fn quadratic_term(kernel: &WendlandKernel, rule: &QuadratureRule) -> CompensatedSum {
    let x = rule.design.points();
    let w = &rule.weights;
    let diag = kernel.diagonal();
    let mut acc = CompensatedSum::default();
    for i in 0..x.len() {
        acc.add(w[i] * w[i] * diag);
        for j in i + 1..x.len() {
            if x[j] - x[i] >= kernel.scale() {
                break;
            }
            acc.add(2.0 * w[i] * w[j] * kernel.eval(x[i], x[j]));
        }
    }
    acc
}

/// Worst-case error of `rule` in the RKHS of `k_s`, using the rule's scale.
pub fn worst_case_error(rule: &QuadratureRule, eval_order: Order) -> Result<WorstCaseReport> {
    let kernel = WendlandKernel::new(eval_order, rule.scale)?;
    let first = kernel.double_integral_uniform01()?;
    let cross = cross_term(&kernel, rule).value();
    let quad = quadratic_term(&kernel, rule).value();

    let mut total = CompensatedSum::default();
    total.add(first);
    total.add(-2.0 * cross);
    total.add(quad);
    let raw_square = total.value();

    let limit = -CLAMP_TOL * first;
    if raw_square < limit {
        return Err(QuadError::NumericalBreakdown { raw_square, limit });
    }
    Ok(WorstCaseReport {
        wce: raw_square.max(0.0).sqrt(),
        raw_square,
        eval_order,
        condition_proxy: rule.condition_proxy.unwrap_or(f64::NAN),
        first_term: first,
        roundoff_bound: ROUNDOFF_FACTOR * f64::EPSILON * (first.abs() + 2.0 * cross.abs() + quad.abs()),
    })
}

/// `e^2 = int int k dP dP - z^T w`, valid only for a Bayesian-quadrature rule
/// evaluated under its own kernel.
pub fn bq_shortcut_square(rule: &QuadratureRule) -> Result<f64> {
    let kernel = rule.kernel();
    let first = kernel.double_integral_uniform01()?;
    Ok(first - cross_term(&kernel, rule).value())
}

/// `sum_i w_i f(X_i)`.
pub fn quadrature_estimate(rule: &QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
    rule.weights
        .iter()
        .zip(rule.design.points())
        .map(|(&w, &x)| w * f(x))
        .sum()
}

pub fn abs_weight_sum(rule: &QuadratureRule) -> f64 {
    rule.weights.iter().map(|w| w.abs()).sum()
}
