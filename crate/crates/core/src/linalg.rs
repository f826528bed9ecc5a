//! Dense symmetric positive-definite factorization and solves.
//!
//! Matrices are kept in packed lower-triangular row-major storage, so entry
//! `(i, j)` with `j <= i` lives at `i (i + 1) / 2 + j` and symmetry holds by
//! construction.

use crate::error::{QuadError, Result};

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    let (i, j) = if j <= i { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

/// Symmetric matrix of order `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QuadError::DimensionMismatch { expected: 1, actual: 0 });
        }
        Ok(SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = SymMatrix::zeros(n)?;
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        Ok(m)
    }

    /// Builds the matrix from `entry(i, j)`, called once for each `j <= i`.
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = SymMatrix::zeros(n)?;
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                m.data[k] = entry(i, j);
                k += 1;
            }
        }
        Ok(m)
    }

    /// Reads the lower triangle of a square row-major array.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(QuadError::DimensionMismatch { expected: n, actual: row.len() });
            }
        }
        SymMatrix::from_fn(n, |i, j| rows[i][j])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[packed_index(i, j)] = value;
    }

    /// Returns `A + tau I`.
    pub fn shifted(&self, tau: f64) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[packed_index(i, i)] += tau;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(QuadError::DimensionMismatch { expected: self.n, actual: x.len() });
        }
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            for (j, &a) in row.iter().enumerate() {
                y[i] += a * x[j];
                if j != i {
                    y[j] += a * x[i];
                }
            }
        }
        Ok(y)
    }

    /// `x^T A x`
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        let ax = self.mul_vec(x)?;
        Ok(x.iter().zip(&ax).map(|(a, b)| a * b).sum())
    }
}

/// Lower-triangular Cholesky factor `L` with `L L^T = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    n: usize,
    data: Vec<f64>,
}

impl CholeskyFactor {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry `L(i, j)`; zero above the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.data[packed_index(i, j)]
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        let start = i * (i + 1) / 2;
        &self.data[start..start + i + 1]
    }

    pub fn pivots(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.data[packed_index(i, i)])
    }

    /// Solves `L L^T x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(QuadError::DimensionMismatch { expected: self.n, actual: b.len() });
        }
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.row(i);
            let s: f64 = row[..i].iter().zip(&y[..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - s) / row[i];
        }
        // back substitution with L^T, column oriented over the rows of L
        for i in (0..n).rev() {
            y[i] /= self.data[packed_index(i, i)];
            let yi = y[i];
            let row = self.row(i);
            for (j, &l) in row[..i].iter().enumerate() {
                y[j] -= l * yi;
            }
        }
        Ok(y)
    }

    /// Reconstructs `L L^T`.
    pub fn reconstruct(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| {
            self.row(i)[..=j].iter().zip(&self.row(j)[..=j]).map(|(a, b)| a * b).sum()
        })
        .expect("factor order is at least one")
    }
}

/// Cholesky–Banachiewicz factorization. Fails on the first pivot that is not
/// strictly positive; the reported index is 1-based.
pub fn cholesky_factor(a: &SymMatrix) -> Result<CholeskyFactor> {
    let n = a.n;
    let mut data = a.data.clone();
    for i in 0..n {
        let start_i = i * (i + 1) / 2;
        for j in 0..=i {
            let start_j = j * (j + 1) / 2;
            let dot: f64 = data[start_i..start_i + j]
                .iter()
                .zip(&data[start_j..start_j + j])
                .map(|(x, y)| x * y)
                .sum();
            let value = data[start_i + j] - dot;
            if i == j {
                if !(value > 0.0) {
                    return Err(QuadError::NotPositiveDefinite { index: i + 1, value });
                }
                data[start_i + i] = value.sqrt();
            } else {
                data[start_i + j] = value / data[start_j + j];
            }
        }
    }
    Ok(CholeskyFactor { n, data })
}

pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.n {
        return Err(QuadError::DimensionMismatch { expected: a.n, actual: b.len() });
    }
    cholesky_factor(a)?.solve(b)
}

/// `(max pivot / min pivot)^2`, a cheap proxy for the 2-norm condition number.
pub fn condition_diagnostic(factor: &CholeskyFactor) -> f64 {
    let (lo, hi) = factor
        .pivots()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), p| (lo.min(p), hi.max(p)));
    (hi / lo).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_factors_to_identity() {
        let l = cholesky_factor(&SymMatrix::identity(3).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(condition_diagnostic(&l), 1.0);
    }

    #[test]
    fn hand_factorization() {
        let a = SymMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = cholesky_factor(&a).unwrap();
        assert_eq!(l.get(0, 0), 2.0);
        assert_eq!(l.get(1, 0), 1.0);
        assert_eq!(l.get(0, 1), 0.0);
        assert_abs_diff_eq!(l.get(1, 1), 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn indefinite_fails_at_second_pivot() {
        let a = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match cholesky_factor(&a) {
            Err(QuadError::NotPositiveDefinite { index, value }) => {
                assert_eq!(index, 2);
                assert_eq!(value, -3.0);
            }
            other => panic!("expected pivot failure, got {other:?}"),
        }
        assert!(solve_spd(&a, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn solve_examples() {
        let x = solve_spd(&SymMatrix::identity(3).unwrap(), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
        let d = SymMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let x = solve_spd(&d, &[2.0, 8.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 2.0, epsilon = 1e-15);
        assert!(matches!(
            solve_spd(&d, &[1.0]),
            Err(QuadError::DimensionMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn diagonal_condition_proxy() {
        let a = SymMatrix::from_rows(&[vec![4.0, 0.0], vec![0.0, 0.25]]).unwrap();
        assert_eq!(condition_diagnostic(&cholesky_factor(&a).unwrap()), 16.0);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(SymMatrix::zeros(0).is_err());
    }

    #[test]
    fn mul_vec_uses_both_triangles() {
        let a = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(a.mul_vec(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        assert_eq!(a.quadratic_form(&[1.0, -1.0]).unwrap(), 2.0);
    }
}
