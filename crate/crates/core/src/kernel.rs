//! Wendland kernels on the line and their exact integrals against the
//! uniform measure on `[0, 1]`.
//!
//! The radial profiles are
//!
//! ```text
//! phi_0(t) = (1-t)_+
//! phi_1(t) = (1-t)_+^3 (3t + 1)
//! phi_2(t) = (1-t)_+^5 (24t^2 + 15t + 3)
//! phi_3(t) = (1-t)_+^7 (315t^3 + 285t^2 + 105t + 15)
//! ```
//!
//! with `(u)_+ = max(0, u)`. The kernel of order `r` is
//! `k_r(x, y) = phi_{r-1}(|x - y| / scale)` and its RKHS is norm-equivalent to
//! the Sobolev space of order `r` on the line.
//!
//! Kernel means are evaluated from exact polynomial antiderivatives written in
//! the complement variable `v = 1 - t`, where every profile is a polynomial
//! with a zero of order `2 nu + 1` at `v = 0`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{QuadError, Result};
use crate::poly::{PiecewisePolynomial, Polynomial};

/// Default kernel length scale on `[0, 1]`.
pub const DEFAULT_SCALE: f64 = 0.1;

/// Factors `q_nu(t)` in `phi_nu(t) = (1-t)^(2 nu + 1) q_nu(t)`, ascending powers.
const PROFILE_FACTORS: [&[f64]; 4] = [
    &[1.0],
    &[1.0, 3.0],
    &[3.0, 15.0, 24.0],
    &[15.0, 105.0, 285.0, 315.0],
];

/// Sobolev smoothness order `r` of a Wendland kernel, restricted to `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(u8);

impl Order {
    pub const ALL: [Order; 4] = [Order(1), Order(2), Order(3), Order(4)];

    pub fn new(r: i64) -> Result<Self> {
        match r {
            1..=4 => Ok(Order(r as u8)),
            _ => Err(QuadError::UnsupportedOrder(r)),
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Index `nu = r - 1` of the radial profile.
    pub fn profile_index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn profile(self) -> &'static WendlandProfile {
        &profiles()[self.profile_index()]
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Radial profile `phi_nu` together with the antiderivatives used for exact
/// integration.
#[derive(Debug, Clone)]
pub struct WendlandProfile {
    nu: usize,
    exponent: i32,
    factor: Polynomial,
    /// `phi_nu(1 - v)` as a polynomial in `v`.
    complement: Polynomial,
    /// `P(v) = int_0^v complement`.
    first_integral: Polynomial,
    /// `Q(v) = int_0^v P`.
    second_integral: Polynomial,
}

fn profiles() -> &'static [WendlandProfile; 4] {
    static PROFILES: OnceLock<[WendlandProfile; 4]> = OnceLock::new();
    PROFILES.get_or_init(|| std::array::from_fn(WendlandProfile::build))
}

impl WendlandProfile {
    fn build(nu: usize) -> Self {
        let exponent = 2 * nu as i32 + 1;
        let factor = Polynomial::new(PROFILE_FACTORS[nu].to_vec());
        let v = Polynomial::new(vec![0.0, 1.0]);
        let complement = &v.pow(exponent as u32) * &factor.compose(&Polynomial::one_minus_x());
        let first_integral = complement.antiderivative();
        let second_integral = first_integral.antiderivative();
        WendlandProfile {
            nu,
            exponent,
            factor,
            complement,
            first_integral,
            second_integral,
        }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// `phi_nu(t)` for `t >= 0`, evaluated in factored form.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        if t >= 1.0 {
            0.0
        } else {
            (1.0 - t).powi(self.exponent) * self.factor.eval(t)
        }
    }

    /// `Psi(u) = int_0^u phi_nu(t) dt` for `u` in `[0, 1]`.
    #[inline]
    pub fn antiderivative(&self, u: f64) -> f64 {
        self.first_integral.eval(1.0) - self.first_integral.eval(1.0 - u)
    }

    /// `Theta(u) = int_0^u Psi(t) dt` for `u` in `[0, 1]`.
    pub fn second_antiderivative(&self, u: f64) -> f64 {
        let total = self.first_integral.eval(1.0);
        u * total - (self.second_integral.eval(1.0) - self.second_integral.eval(1.0 - u))
    }

    /// The profile as a piecewise polynomial in `t`: the expanded polynomial on
    /// `[0, 1)` and zero on `[1, inf)`.
    pub fn piecewise(&self) -> PiecewisePolynomial {
        let expanded = self.complement.compose(&Polynomial::one_minus_x());
        PiecewisePolynomial::new(vec![0.0, 1.0], vec![expanded, Polynomial::zero()])
    }
}

fn profile_for(nu: i64) -> Result<&'static WendlandProfile> {
    usize::try_from(nu)
        .ok()
        .and_then(|k| profiles().get(k))
        .ok_or(QuadError::UnsupportedOrder(nu + 1))
}

/// `phi_{1,nu}(t)`; zero for `t >= 1`.
pub fn eval_phi(nu: i64, t: f64) -> Result<f64> {
    let profile = profile_for(nu)?;
    if !(t >= 0.0) {
        return Err(QuadError::Domain(format!("profile argument must be >= 0, got {t}")));
    }
    Ok(profile.value(t))
}

/// `int_0^u phi_{1,nu}(t) dt` for `u` in `[0, 1]`.
pub fn phi_antiderivative(nu: i64, u: f64) -> Result<f64> {
    let profile = profile_for(nu)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(QuadError::Domain(format!("antiderivative argument must lie in [0, 1], got {u}")));
    }
    Ok(profile.antiderivative(u))
}

/// Compactly supported Wendland kernel `k_r(x, y) = phi_{r-1}(|x - y| / scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WendlandKernel {
    order: Order,
    scale: f64,
}

impl WendlandKernel {
    pub fn new(order: Order, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(QuadError::Domain(format!("kernel scale must be positive and finite, got {scale}")));
        }
        Ok(WendlandKernel { order, scale })
    }

    pub fn with_default_scale(order: Order) -> Self {
        WendlandKernel {
            order,
            scale: DEFAULT_SCALE,
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn profile(&self) -> &'static WendlandProfile {
        self.order.profile()
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.profile().value((x - y).abs() / self.scale)
    }

    /// `k(x, x)`.
    pub fn diagonal(&self) -> f64 {
        self.profile().value(0.0)
    }

    fn check_mean_scale(&self) -> Result<()> {
        if self.scale > 0.5 {
            return Err(QuadError::Domain(format!(
                "kernel means on [0, 1] need scale <= 0.5, got {}",
                self.scale
            )));
        }
        Ok(())
    }

    /// Kernel mean `m(y) = int_0^1 k(y, x) dx` under the uniform measure.
    pub fn mean_uniform01(&self, y: f64) -> Result<f64> {
        self.check_mean_scale()?;
        if !(0.0..=1.0).contains(&y) {
            return Err(QuadError::Domain(format!("kernel mean argument must lie in [0, 1], got {y}")));
        }
        Ok(self.mean_unchecked(y))
    }

    #[inline]
    pub(crate) fn mean_unchecked(&self, y: f64) -> f64 {
        let profile = self.profile();
        let left = (y / self.scale).min(1.0);
        let right = ((1.0 - y) / self.scale).min(1.0);
        self.scale * (profile.antiderivative(left) + profile.antiderivative(right))
    }

    /// `int_0^1 int_0^1 k(x, x') dx dx'`.
    pub fn double_integral_uniform01(&self) -> Result<f64> {
        self.check_mean_scale()?;
        let profile = self.profile();
        let d = self.scale;
        // int_0^1 Psi(min(y/d, 1)) dy = d Theta(1) + (1 - d) Psi(1), doubled by symmetry
        Ok(2.0 * d * (d * profile.second_antiderivative(1.0) + (1.0 - d) * profile.antiderivative(1.0)))
    }
}

pub fn kernel_eval(kernel: &WendlandKernel, x: f64, y: f64) -> f64 {
    kernel.eval(x, y)
}

pub fn kernel_mean_uniform01(kernel: &WendlandKernel, y: f64) -> Result<f64> {
    kernel.mean_uniform01(y)
}

pub fn kernel_double_integral_uniform01(kernel: &WendlandKernel) -> Result<f64> {
    kernel.double_integral_uniform01()
}
