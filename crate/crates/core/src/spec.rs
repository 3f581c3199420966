//! Mean vector and covariance matrix of a Gaussian vector.

use num_rational::BigRational;

use crate::error::{MomentError, Result};
use crate::scalar::{rational_to_f64, MomentField};

/// Mean `mu` and symmetric covariance `Phi` over a numeric field.
///
/// The covariance is stored dense and exactly symmetric. Positive
/// semidefiniteness is not required here; only sampling needs it.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec<T> {
    mu: Vec<T>,
    cov: Vec<Vec<T>>,
}

pub type ExactSpec = GaussianSpec<BigRational>;
pub type FloatSpec = GaussianSpec<f64>;

impl<T: MomentField> GaussianSpec<T> {
    /// Validates shapes and symmetry. Exact fields require `phi_ij == phi_ji`;
    /// floats accept a relative gap up to 1e-12 and are then symmetrized.
    pub fn new(mu: Vec<T>, cov: Vec<Vec<T>>) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(MomentError::EmptyMultiIndex);
        }
        if cov.iter().any(|row| row.len() != cov.len()) {
            return Err(MomentError::NotSquare);
        }
        if cov.len() != n {
            return Err(MomentError::DimensionMismatch {
                expected: n,
                found: cov.len(),
            });
        }
        let mut cov = cov;
        for i in 0..n {
            for j in i + 1..n {
                let merged = T::symmetric_merge(&cov[i][j], &cov[j][i])
                    .ok_or(MomentError::NotSymmetric { i: i + 1, j: j + 1 })?;
                cov[i][j] = merged.clone();
                cov[j][i] = merged;
            }
        }
        Ok(GaussianSpec { mu, cov })
    }

    /// Zero mean, identity covariance.
    pub fn standard(n: usize) -> Self {
        let cov = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        GaussianSpec {
            mu: vec![T::zero(); n],
            cov,
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mean(&self, j: usize) -> &T {
        &self.mu[j]
    }

    pub fn means(&self) -> &[T] {
        &self.mu
    }

    pub fn cov(&self, i: usize, j: usize) -> &T {
        &self.cov[i][j]
    }

    pub fn cov_rows(&self) -> &[Vec<T>] {
        &self.cov
    }

    /// Same covariance with the mean set to zero.
    pub fn centered(&self) -> Self {
        GaussianSpec {
            mu: vec![T::zero(); self.dim()],
            cov: self.cov.clone(),
        }
    }

    /// Mean scaled by `t` and covariance by `t^2`.
    pub fn scaled(&self, t: &T) -> Self {
        let t2 = t.mul(t);
        GaussianSpec {
            mu: self.mu.iter().map(|m| m.mul(t)).collect(),
            cov: self
                .cov
                .iter()
                .map(|r| r.iter().map(|c| c.mul(&t2)).collect())
                .collect(),
        }
    }

    /// Marginal over the given coordinates, in the given order.
    pub fn restrict(&self, coords: &[usize]) -> Self {
        GaussianSpec {
            mu: coords.iter().map(|&k| self.mu[k].clone()).collect(),
            cov: coords
                .iter()
                .map(|&i| coords.iter().map(|&j| self.cov[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Connected components of the nonzero off-diagonal pattern of `Phi`,
    /// each sorted ascending, ordered by smallest member.
    pub fn covariance_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut block = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if block[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut members = vec![start];
            block[start] = id;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if block[j] == usize::MAX && !self.cov[i][j].is_zero() {
                        block[j] = id;
                        members.push(j);
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            blocks.push(members);
        }
        blocks
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(MomentError::DimensionMismatch {
                expected: n,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl ExactSpec {
    pub fn to_float(&self) -> FloatSpec {
        GaussianSpec {
            mu: self.mu.iter().map(rational_to_f64).collect(),
            cov: self
                .cov
                .iter()
                .map(|r| r.iter().map(rational_to_f64).collect())
                .collect(),
        }
    }
}

/// Validating constructor; the numeric mode is the field `T`.
pub fn make_gaussian_spec<T: MomentField>(mu: Vec<T>, cov: Vec<Vec<T>>) -> Result<GaussianSpec<T>> {
    GaussianSpec::new(mu, cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn accepts_symmetric() {
        let s = make_gaussian_spec(vec![0.0, 0.0], vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        assert_eq!(s.dim(), 2);
        let s = make_gaussian_spec(vec![q("1")], vec![vec![q("2")]]).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn rejects_asymmetric() {
        let err =
            make_gaussian_spec(vec![0.0, 0.0], vec![vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap_err();
        assert!(err.to_string().contains("covariance not symmetric"));
        let err = make_gaussian_spec(
            vec![q("0"), q("0")],
            vec![
                vec![q("1"), q("1/2")],
                vec![q("1/2") + q("1/1000000000000000"), q("1")],
            ],
        )
        .unwrap_err();
        assert_eq!(err, MomentError::NotSymmetric { i: 1, j: 2 });
    }

    #[test]
    fn float_symmetrizes_within_tolerance() {
        let s = make_gaussian_spec(vec![0.0, 0.0], vec![vec![1.0, 0.5], vec![0.5 + 1e-13, 1.0]])
            .unwrap();
        assert_eq!(s.cov(0, 1), s.cov(1, 0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            make_gaussian_spec(vec![0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap_err(),
            MomentError::DimensionMismatch {
                expected: 1,
                found: 2
            }
        );
        assert_eq!(
            make_gaussian_spec(vec![0.0, 0.0], vec![vec![1.0, 0.0], vec![0.0]]).unwrap_err(),
            MomentError::NotSquare
        );
    }

    #[test]
    fn blocks_follow_nonzero_pattern() {
        let z = 0.0;
        let s = make_gaussian_spec(
            vec![z; 4],
            vec![
                vec![1.0, z, 0.3, z],
                vec![z, 1.0, z, z],
                vec![0.3, z, 1.0, z],
                vec![z, z, z, 2.0],
            ],
        )
        .unwrap();
        assert_eq!(s.covariance_blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }
}
