//! Predicted convergence exponents for kernel quadrature under smoothness
//! misspecification.
//!
//! Every function returns a decay exponent `p`, meaning the error behaves
//! like `O(n^-p)`. Larger is faster. `r` is the smoothness the rule was built
//! for and `s <= r` is the smoothness of the integrand.

use crate::error::{QuadError, Result};

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(QuadError::Domain(msg()))
    }
}

fn check_orders(r: f64, s: f64) -> Result<()> {
    require(r.is_finite() && s.is_finite(), || format!("orders must be finite (r={r}, s={s})"))?;
    require(s > 0.0, || format!("s must be positive, got {s}"))?;
    require(s <= r, || format!("requires s <= r, got s={s}, r={r}"))
}

/// Rate for rules with worst-case error `O(n^-b)` and `sum |w_i| = O(n^c)`:
/// `b s / r - c (r - s) / r`.
pub fn rate_weight_bound(b: f64, c: f64, r: f64, s: f64) -> Result<f64> {
    check_orders(r, s)?;
    require(b > 0.0, || format!("requires b > 0, got {b}"))?;
    require(c >= 0.0, || format!("requires c >= 0, got {c}"))?;
    Ok(b * s / r - c * (r - s) / r)
}

/// Rate for rules with worst-case error `O(n^-b)` and separation radius
/// `Theta(n^-a)`: `min(b - a (r - s), a s)`. Negative values mean no
/// guarantee.
pub fn rate_sep_bound(a: f64, b: f64, r: f64, s: f64) -> Result<f64> {
    check_orders(r, s)?;
    require(a > 0.0, || format!("requires a > 0, got {a}"))?;
    require(b > 0.0, || format!("requires b > 0, got {b}"))?;
    Ok((b - a * (r - s)).min(a * s))
}

/// Bayesian quadrature with fill distance `O(n^-alpha)` and
/// `h <= c q^delta`: `alpha (r - (r - s) / delta)`.
pub fn rate_bq_misspecified(alpha: f64, delta: f64, r: f64, s: f64) -> Result<f64> {
    check_orders(r, s)?;
    require(alpha > 0.0, || format!("requires alpha > 0, got {alpha}"))?;
    require(delta <= 1.0, || format!("requires delta <= 1, got {delta}"))?;
    if !(delta > 1.0 - s / r) {
        return Err(QuadError::GuaranteeVoid(format!(
            "delta = {delta} <= 1 - s/r = {}; the predicted exponent is not positive",
            1.0 - s / r
        )));
    }
    Ok(alpha * (r - (r - s) / delta))
}

/// Well-specified Bayesian quadrature with fill distance `O(n^-alpha)`,
/// `0 < alpha <= 1/d`: `alpha r`.
pub fn rate_bq_wellspecified(alpha: f64, r: f64, d: u32) -> Result<f64> {
    require(d >= 1, || "dimension must be at least 1".to_string())?;
    require(r.is_finite() && r > 0.0, || format!("r must be positive, got {r}"))?;
    require(alpha > 0.0 && alpha <= 1.0 / f64::from(d), || {
        format!("requires 0 < alpha <= 1/d = {}, got {alpha}", 1.0 / f64::from(d))
    })?;
    Ok(alpha * r)
}

/// Parameters shared by the four predictors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInputs {
    pub r: f64,
    pub s: f64,
    /// Worst-case error exponent in the RKHS of order `r`.
    pub b: f64,
    /// Growth exponent of `sum |w_i|`.
    pub c: f64,
    /// Decay exponent of the separation radius.
    pub a: f64,
    /// Decay exponent of the fill distance.
    pub alpha: f64,
    /// Quasi-uniformity exponent in `h <= c q^delta`.
    pub delta: f64,
    pub d: u32,
}

impl RateInputs {
    /// Defaults for a quasi-uniform design in dimension `d`:
    /// `alpha = 1/d`, `b = r/d`, `a = b/r`, `c = 0`, `delta = 1`.
    pub fn quasi_uniform(r: f64, s: f64, d: u32) -> Self {
        let alpha = 1.0 / f64::from(d.max(1));
        let b = r * alpha;
        RateInputs {
            r,
            s,
            b,
            c: 0.0,
            a: b / r,
            alpha,
            delta: 1.0,
            d,
        }
    }

    pub fn predictions(&self) -> RatePredictions {
        RatePredictions {
            weight_bound: rate_weight_bound(self.b, self.c, self.r, self.s),
            sep_bound: rate_sep_bound(self.a, self.b, self.r, self.s),
            bq_misspecified: rate_bq_misspecified(self.alpha, self.delta, self.r, self.s),
            bq_wellspecified: rate_bq_wellspecified(self.alpha, self.r, self.d),
        }
    }
}

#[derive(Debug)]
pub struct RatePredictions {
    pub weight_bound: Result<f64>,
    pub sep_bound: Result<f64>,
    pub bq_misspecified: Result<f64>,
    pub bq_wellspecified: Result<f64>,
}
