//! Dense univariate polynomials and piecewise polynomials on the real line.

use std::ops::{Add, Mul};

/// Polynomial with coefficients in ascending powers: `c[0] + c[1] x + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs: Vec<f64> = coeffs.into();
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial::new(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `1 - x`
    pub fn one_minus_x() -> Self {
        Polynomial::new(vec![1.0, -1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect::<Vec<_>>();
        Polynomial::new(coeffs)
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Polynomial::new(coeffs)
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        (0..exp).fold(Polynomial::constant(1.0), |acc, _| &acc * self)
    }

    /// Composition `self(inner(x))`.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, &c| &(&acc * inner) + &Polynomial::constant(c))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) + rhs.coeffs.get(k).copied().unwrap_or(0.0))
            .collect::<Vec<_>>();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

/// A function that is polynomial on each interval between consecutive
/// breakpoints. The last piece extends to `+inf`; arguments left of the first
/// breakpoint evaluate the first piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    breaks: Vec<f64>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePolynomial {
    /// `breaks[k]` is the left end of `pieces[k]`. Breaks must be strictly
    /// increasing and match the number of pieces.
    pub fn new(breaks: Vec<f64>, pieces: Vec<Polynomial>) -> Self {
        assert_eq!(breaks.len(), pieces.len(), "one breakpoint per piece");
        assert!(
            breaks.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must be strictly increasing"
        );
        PiecewisePolynomial { breaks, pieces }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    fn piece_index(&self, x: f64) -> usize {
        self.breaks.partition_point(|&b| b <= x).saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn derivative(&self) -> PiecewisePolynomial {
        PiecewisePolynomial {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(Polynomial::derivative).collect(),
        }
    }

    /// Right limit minus left limit at interior breakpoint `k` (k >= 1).
    pub fn jump(&self, k: usize) -> f64 {
        let x = self.breaks[k];
        self.pieces[k].eval(x) - self.pieces[k - 1].eval(x)
    }
}
