//! Design point sets on `[0, 1]` and their geometric diagnostics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QuadError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Uniform,
    NonUniform,
    Custom,
}

impl DesignKind {
    pub fn label(self) -> &'static str {
        match self {
            DesignKind::Uniform => "uniform",
            DesignKind::NonUniform => "nonuniform",
            DesignKind::Custom => "custom",
        }
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DesignKind {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(DesignKind::Uniform),
            "nonuniform" | "non-uniform" => Ok(DesignKind::NonUniform),
            "custom" => Ok(DesignKind::Custom),
            other => Err(QuadError::InvalidDesign(format!("unknown design label '{other}'"))),
        }
    }
}

/// Strictly increasing points in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSet {
    points: Vec<f64>,
    kind: DesignKind,
}

impl DesignSet {
    /// Wraps caller-supplied points. A single point is accepted here (but
    /// not by the generated designs).
    pub fn custom(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(QuadError::InvalidDesign("a design needs at least one point".into()));
        }
        if let Some(bad) = points.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(QuadError::InvalidDesign(format!("point {bad} lies outside [0, 1]")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QuadError::InvalidDesign("points must be strictly increasing".into()));
        }
        Ok(DesignSet {
            points,
            kind: DesignKind::Custom,
        })
    }

    pub fn generate(kind: DesignKind, n: usize) -> Result<Self> {
        match kind {
            DesignKind::Uniform => uniform_design(n),
            DesignKind::NonUniform => nonuniform_design(n),
            DesignKind::Custom => Err(QuadError::InvalidDesign(
                "custom designs are built from explicit points".into(),
            )),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }

    /// Fill distance on `[0, 1]`: the largest distance from a domain point to
    /// its nearest design point.
    pub fn fill_distance(&self) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        self.gaps()
            .map(|g| 0.5 * g)
            .fold(first.max(1.0 - last), f64::max)
    }

    /// Half the smallest pairwise distance. Infinite for a single point.
    pub fn separation_radius(&self) -> f64 {
        0.5 * self.gaps().fold(f64::INFINITY, f64::min)
    }

    /// `fill_distance / separation_radius`; zero for a single point.
    pub fn quasi_uniformity_ratio(&self) -> f64 {
        self.fill_distance() / self.separation_radius()
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(QuadError::InvalidDesign(format!("generated designs need n >= 2, got {n}")));
    }
    Ok(())
}

/// Equally spaced grid `X_i = (i - 1) / (n - 1)`.
pub fn uniform_design(n: usize) -> Result<DesignSet> {
    check_size(n)?;
    let step = (n - 1) as f64;
    let points = (0..n).map(|i| i as f64 / step).collect();
    Ok(DesignSet {
        points,
        kind: DesignKind::Uniform,
    })
}

/// Odd-indexed points on the uniform grid, each even-indexed point placed
/// `(n - 1)^-2` to the right of its predecessor.
pub fn nonuniform_design(n: usize) -> Result<DesignSet> {
    check_size(n)?;
    if n == 2 {
        // The second point would sit at distance 1 from the first, i.e. the
        // pair step equals the grid step and the construction collapses to the
        // uniform grid; the clustering rule only makes sense from n = 3 on.
        return Err(QuadError::InvalidDesign(
            "nonuniform design needs n >= 3: for n = 2 the offset (n-1)^-2 equals the grid step".into(),
        ));
    }
    let step = (n - 1) as f64;
    let offset = 1.0 / (step * step);
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        // zero-based even index corresponds to an odd one-based index
        let x = if i % 2 == 0 { i as f64 / step } else { points[i - 1] + offset };
        points.push(x);
    }
    Ok(DesignSet {
        points,
        kind: DesignKind::NonUniform,
    })
}

pub fn fill_distance(design: &DesignSet) -> f64 {
    design.fill_distance()
}

pub fn separation_radius(design: &DesignSet) -> f64 {
    design.separation_radius()
}

pub fn quasi_uniformity_ratio(design: &DesignSet) -> f64 {
    design.quasi_uniformity_ratio()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_design(2).unwrap().points(), &[0.0, 1.0]);
        assert_eq!(uniform_design(5).unwrap().points(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_abs_diff_eq!(uniform_design(11).unwrap().points()[2], 0.2, epsilon = 1e-15);
        assert!(uniform_design(1).is_err());
    }

    #[test]
    fn nonuniform_examples() {
        assert_eq!(nonuniform_design(5).unwrap().points(), &[0.0, 0.0625, 0.5, 0.5625, 1.0]);
        assert_eq!(nonuniform_design(3).unwrap().points(), &[0.0, 0.25, 1.0]);
        assert!(nonuniform_design(2).is_err());
        assert!(nonuniform_design(0).is_err());
    }

    #[test]
    fn geometry_examples() {
        let u = uniform_design(5).unwrap();
        assert_eq!(u.fill_distance(), 0.125);
        assert_eq!(u.separation_radius(), 0.125);
        assert_eq!(u.quasi_uniformity_ratio(), 1.0);

        let nu = nonuniform_design(5).unwrap();
        assert_eq!(nu.fill_distance(), 0.21875);
        assert_eq!(nu.separation_radius(), 0.03125);
        assert_eq!(nu.quasi_uniformity_ratio(), 7.0);

        assert_eq!(uniform_design(2).unwrap().fill_distance(), 0.5);
    }

    #[test]
    fn boundary_gaps_count_toward_fill() {
        let d = DesignSet::custom(vec![0.3, 0.4]).unwrap();
        assert_abs_diff_eq!(d.fill_distance(), 0.6, epsilon = 1e-15);
        let single = DesignSet::custom(vec![0.5]).unwrap();
        assert_eq!(single.fill_distance(), 0.5);
        assert_eq!(single.separation_radius(), f64::INFINITY);
    }

    #[test]
    fn custom_validation() {
        assert!(DesignSet::custom(vec![]).is_err());
        assert!(DesignSet::custom(vec![0.2, 0.2]).is_err());
        assert!(DesignSet::custom(vec![0.5, 0.1]).is_err());
        assert!(DesignSet::custom(vec![-0.1, 0.1]).is_err());
        assert!(DesignSet::generate(DesignKind::Custom, 4).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for kind in [DesignKind::Uniform, DesignKind::NonUniform, DesignKind::Custom] {
            assert_eq!(kind.label().parse::<DesignKind>().unwrap(), kind);
        }
        assert!("grid".parse::<DesignKind>().is_err());
    }

    #[test]
    fn separation_never_exceeds_fill() {
        for n in 3..300 {
            for kind in [DesignKind::Uniform, DesignKind::NonUniform] {
                let d = DesignSet::generate(kind, n).unwrap();
                assert!(d.separation_radius() <= d.fill_distance(), "{kind} n={n}");
                assert!(d.points().windows(2).all(|w| w[0] < w[1]));
                assert!(*d.points().last().unwrap() <= 1.0);
            }
            assert!(uniform_design(n).unwrap().quasi_uniformity_ratio() <= 2.0);
        }
    }
}
