//! Bayesian quadrature on `[0, 1]` with compactly supported Wendland kernels.
//!
//! Quadrature weights are built for a kernel of Sobolev order `r` and their
//! worst-case error is measured in the RKHS of a possibly different order
//! `s`, which exposes how the rule behaves when the integrand is rougher (or
//! smoother) than assumed. The [`study`] module sweeps the design size and
//! both orders on two point configurations and fits empirical convergence
//! exponents; [`rates`] gives the matching theoretical exponents.
//!
//! ```
//! use quad_core::{bq_weights, uniform_design, worst_case_error, Order};
//!
//! let design = uniform_design(33).unwrap();
//! let rule = bq_weights(Order::new(2).unwrap(), 0.1, &design).unwrap();
//! let report = worst_case_error(&rule, Order::new(1).unwrap()).unwrap();
//! assert!(report.wce > 0.0 && report.wce < 0.1);
//! ```

pub mod cli;
pub mod config;
pub mod design;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod rates;
pub mod report;
pub mod study;

pub use design::{nonuniform_design, uniform_design, DesignKind, DesignSet};
pub use error::{QuadError, Result};
pub use kernel::{
    eval_phi, kernel_double_integral_uniform01, kernel_eval, kernel_mean_uniform01, phi_antiderivative, Order,
    WendlandKernel, DEFAULT_SCALE,
};
pub use linalg::{cholesky_factor, condition_diagnostic, solve_spd, CholeskyFactor, SymMatrix};
pub use quadrature::{
    abs_weight_sum, bq_weights, bq_weights_with, quadrature_estimate, worst_case_error, QuadratureRule,
    SolveOptions, WorstCaseReport,
};
pub use study::{fit_rate, run_study, summarize, RateFit, RowStatus, StudyConfig, StudyRow, Summary};
