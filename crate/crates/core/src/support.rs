//! Enumeration of the admissible exponent matrices `S_a`.
//!
//! The iterator walks upper-triangle positions in canonical order and
//! produces the lexicographic successor of the current matrix directly.
//! Each position is capped by the remaining residual budgets, so every
//! partial assignment extends to at least one admissible matrix (fill the
//! rest with zeros) and no dead branches are ever visited.

use num_bigint::BigUint;

use crate::error::{MomentError, Result};
use crate::types::{triangle_positions, MultiIndex, PairExponentMatrix, ResidualDegrees};

/// `L_{a,k} = a_k - 2 l_kk - sum_{j != k} l_jk` for each `k`.
pub fn residual_degrees(a: &MultiIndex, l: &PairExponentMatrix) -> Result<ResidualDegrees> {
    let n = a.dim();
    if l.dim() != n {
        return Err(MomentError::DimensionMismatch {
            expected: n,
            found: l.dim(),
        });
    }
    let values = (0..n)
        .map(|k| {
            let used: i64 = (0..n).map(|j| l.get(j, k) as i64).sum::<i64>() + l.get(k, k) as i64;
            a.get(k) as i64 - used
        })
        .collect();
    Ok(ResidualDegrees::new(values))
}

/// Membership test for `S_a`.
pub fn is_admissible(a: &MultiIndex, l: &PairExponentMatrix) -> Result<bool> {
    Ok(residual_degrees(a, l)?.is_admissible())
}

/// Lazy, single-consumer stream over `S_a` in canonical order.
#[derive(Debug, Clone)]
pub struct SupportIterator {
    n: usize,
    positions: Vec<(usize, usize)>,
    values: Vec<u32>,
    budget: Vec<u32>,
    /// Positions below this index are pinned and never advanced.
    fixed: usize,
    started: bool,
    done: bool,
}

impl SupportIterator {
    pub fn new(a: &MultiIndex) -> Self {
        let n = a.dim();
        let positions: Vec<_> = triangle_positions(n).collect();
        SupportIterator {
            n,
            values: vec![0; positions.len()],
            positions,
            budget: a.exponents().to_vec(),
            fixed: 0,
            started: false,
            done: false,
        }
    }

    /// Iterator restricted to matrices whose first `prefix.len()` canonical
    /// entries equal `prefix`. Empty if the prefix itself is inadmissible.
    pub fn with_prefix(a: &MultiIndex, prefix: &[u32]) -> Self {
        let mut it = SupportIterator::new(a);
        assert!(
            prefix.len() <= it.positions.len(),
            "prefix longer than the triangle"
        );
        for (p, &v) in prefix.iter().enumerate() {
            if !it.consume(p, v) {
                it.done = true;
                break;
            }
            it.values[p] = v;
        }
        it.fixed = prefix.len();
        it
    }

    fn cost(&self, p: usize) -> (usize, usize) {
        self.positions[p]
    }

    /// Takes `times` units of position `p` out of the budgets if they fit.
    fn consume(&mut self, p: usize, times: u32) -> bool {
        let (i, j) = self.cost(p);
        if i == j {
            let need = 2 * times;
            if self.budget[i] < need {
                return false;
            }
            self.budget[i] -= need;
        } else {
            if self.budget[i] < times || self.budget[j] < times {
                return false;
            }
            self.budget[i] -= times;
            self.budget[j] -= times;
        }
        true
    }

    fn release(&mut self, p: usize, times: u32) {
        let (i, j) = self.cost(p);
        if i == j {
            self.budget[i] += 2 * times;
        } else {
            self.budget[i] += times;
            self.budget[j] += times;
        }
    }

    /// Moves to the next admissible matrix; `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            // All-zero completion of the prefix is always admissible.
            self.started = true;
            return true;
        }
        for p in (self.fixed..self.positions.len()).rev() {
            if self.consume(p, 1) {
                self.values[p] += 1;
                return true;
            }
            let v = std::mem::take(&mut self.values[p]);
            self.release(p, v);
        }
        self.done = true;
        false
    }

    /// Upper-triangle entries of the current matrix.
    pub fn current_entries(&self) -> &[u32] {
        &self.values
    }

    /// Residual degrees `L_{a,k}` of the current matrix (all nonnegative).
    pub fn current_residuals(&self) -> &[u32] {
        &self.budget
    }

    pub fn current(&self) -> PairExponentMatrix {
        PairExponentMatrix::from_upper(self.n, self.values.clone()).expect("triangle length")
    }

    /// Counts the remaining matrices without materializing them.
    pub fn count_remaining(mut self) -> BigUint {
        let mut count = BigUint::default();
        let mut small: u64 = 0;
        while self.advance() {
            small += 1;
            if small == u64::MAX {
                count += small;
                small = 0;
            }
        }
        count + small
    }
}

impl Iterator for SupportIterator {
    type Item = PairExponentMatrix;

    fn next(&mut self) -> Option<PairExponentMatrix> {
        self.advance().then(|| self.current())
    }
}

/// Streams `S_a` in canonical order.
pub fn enumerate_support(a: &MultiIndex) -> SupportIterator {
    SupportIterator::new(a)
}

/// `|S_a|`.
pub fn count_support(a: &MultiIndex) -> BigUint {
    SupportIterator::new(a).count_remaining()
}

/// Splits `S_a` into disjoint iterators keyed by the admissible values of
/// the first `depth` canonical entries. Concatenating the partitions in the
/// returned order reproduces the canonical stream.
pub fn partition_support(a: &MultiIndex, depth: usize) -> Vec<SupportIterator> {
    let total = triangle_positions(a.dim()).count();
    let depth = depth.min(total);
    let mut prefixes = Vec::new();
    // Reuse the enumerator on the leading positions to list admissible prefixes.
    let mut probe = SupportIterator::new(a);
    probe.positions.truncate(depth);
    probe.values.truncate(depth);
    while probe.advance() {
        prefixes.push(probe.values.clone());
    }
    prefixes
        .into_iter()
        .map(|prefix| SupportIterator::with_prefix(a, &prefix))
        .collect()
}
