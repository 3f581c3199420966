//! Index and term types shared by every stage of the computation.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{MomentError, Result};

/// Exponent vector `(a_1, ..., a_n)` of a product moment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(MomentError::EmptyMultiIndex);
        }
        Ok(MultiIndex(exponents))
    }

    /// Validates signed input, reporting the first negative entry (1-based).
    pub fn from_signed(exponents: &[i64]) -> Result<Self> {
        if exponents.is_empty() {
            return Err(MomentError::EmptyMultiIndex);
        }
        let mut out = Vec::with_capacity(exponents.len());
        for (k, &e) in exponents.iter().enumerate() {
            if e < 0 {
                return Err(MomentError::NegativeExponent { position: k + 1 });
            }
            let e = u32::try_from(e)
                .map_err(|_| MomentError::OutOfRange(format!("exponent {e} is too large")))?;
            out.push(e);
        }
        Ok(MultiIndex(out))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `a - e_i - e_j` (or `a - 2 e_i` when `i == j`), if it stays nonnegative.
    pub fn lowered_pair(&self, i: usize, j: usize) -> Option<MultiIndex> {
        let mut out = self.0.clone();
        out[i] = out[i].checked_sub(1)?;
        out[j] = out[j].checked_sub(1)?;
        Some(MultiIndex(out))
    }

    /// Sub-index over the given coordinates, in the given order.
    pub fn select(&self, coords: &[usize]) -> Result<MultiIndex> {
        MultiIndex::new(coords.iter().map(|&k| self.0[k]).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Validates an exponent vector given as signed integers.
pub fn make_multi_index(exponents: &[i64]) -> Result<MultiIndex> {
    MultiIndex::from_signed(exponents)
}

/// Number of stored entries for an `n x n` symmetric matrix.
pub const fn triangle_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of `(i, j)` with `i <= j` in row-major upper-triangle storage.
#[inline]
pub const fn triangle_offset(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + j
}

/// Upper-triangle positions `(i, j)`, `i <= j`, in canonical order:
/// row-major with the diagonal entry of each row first.
pub fn triangle_positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

/// Symmetric nonnegative integer matrix `l`; each unordered pair is stored once.
///
/// Ordering is lexicographic on the flattened upper triangle, which is the
/// canonical term order of a [`MomentPolynomial`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairExponentMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl PairExponentMatrix {
    pub fn zeros(n: usize) -> Self {
        PairExponentMatrix {
            n,
            entries: vec![0; triangle_len(n)],
        }
    }

    /// Builds from upper-triangle entries in canonical order.
    pub fn from_upper(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != triangle_len(n) {
            return Err(MomentError::DimensionMismatch {
                expected: triangle_len(n),
                found: entries.len(),
            });
        }
        Ok(PairExponentMatrix { n, entries })
    }

    /// Builds from `(i, j, value)` triples (0-based, either orientation).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, u32)]) -> Result<Self> {
        let mut m = Self::zeros(n);
        for &(i, j, v) in pairs {
            if i >= n || j >= n {
                return Err(MomentError::OutOfRange(format!(
                    "pair ({}, {}) outside a {n}-dimensional matrix",
                    i + 1,
                    j + 1
                )));
            }
            m.set(i, j, v);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        triangle_offset(self.n, i, j)
    }

    /// `l_ij`; symmetric in its arguments.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        let at = self.offset(i, j);
        self.entries[at] = value;
    }

    /// Upper-triangle entries in canonical order.
    pub fn upper(&self) -> &[u32] {
        &self.entries
    }

    /// `M_l`, the sum of the diagonal entries.
    pub fn diag_sum(&self) -> u64 {
        (0..self.n).map(|k| self.get(k, k) as u64).sum()
    }

    /// Sum of all stored entries (each unordered pair counted once).
    pub fn pair_total(&self) -> u64 {
        self.entries.iter().map(|&v| v as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// The leading `m x m` block.
    pub fn leading_block(&self, m: usize) -> PairExponentMatrix {
        assert!(m <= self.n);
        let entries = triangle_positions(m).map(|(i, j)| self.get(i, j)).collect();
        PairExponentMatrix { n: m, entries }
    }
}

/// `L_{a,k}` for every coordinate; entries may be negative for inadmissible `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidualDegrees(Vec<i64>);

impl ResidualDegrees {
    pub fn new(values: Vec<i64>) -> Self {
        ResidualDegrees(values)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, k: usize) -> i64 {
        self.0[k]
    }

    pub fn is_admissible(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    /// Nonnegative residuals as `u32`, or `None` when any is negative.
    pub fn to_unsigned(&self) -> Option<Vec<u32>> {
        self.0.iter().map(|&v| u32::try_from(v).ok()).collect()
    }
}

/// Arbitrary-precision nonnegative coefficient `d_{a,l}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigCoefficient(pub BigUint);

impl BigCoefficient {
    pub fn one() -> Self {
        BigCoefficient(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for BigCoefficient {
    fn from(v: u64) -> Self {
        BigCoefficient(BigUint::from(v))
    }
}

impl fmt::Display for BigCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One summand `d * prod phi_ij^{l_ij} * prod mu_j^{L_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MomentTerm {
    pub l: PairExponentMatrix,
    pub d: BigCoefficient,
    pub residual: Vec<u32>,
}

/// A sum of [`MomentTerm`]s kept in canonical order with like terms merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPolynomial {
    a: MultiIndex,
    terms: Vec<MomentTerm>,
}

impl MomentPolynomial {
    /// Sorts terms canonically, merges equal monomials and drops zeros.
    pub fn from_terms(a: MultiIndex, mut terms: Vec<MomentTerm>) -> Self {
        terms.sort_by(|x, y| (&x.l, &x.residual).cmp(&(&y.l, &y.residual)));
        let mut merged: Vec<MomentTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if last.l == term.l && last.residual == term.residual => {
                    last.d.0 += term.d.0;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| !t.d.is_zero());
        MomentPolynomial { a, terms: merged }
    }

    /// Wraps terms that are already canonical. Used by the builder, which
    /// emits them in order straight from the enumerator.
    pub(crate) fn from_canonical(a: MultiIndex, terms: Vec<MomentTerm>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].l < w[1].l));
        MomentPolynomial { a, terms }
    }

    pub fn zero(a: MultiIndex) -> Self {
        MomentPolynomial {
            a,
            terms: Vec::new(),
        }
    }

    pub fn multi_index(&self) -> &MultiIndex {
        &self.a
    }

    pub fn terms(&self) -> &[MomentTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: u64) -> MomentPolynomial {
        if factor == 0 {
            return MomentPolynomial::zero(self.a.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| MomentTerm {
                d: BigCoefficient(&t.d.0 * factor),
                ..t.clone()
            })
            .collect();
        MomentPolynomial {
            a: self.a.clone(),
            terms,
        }
    }

    /// Equality of the monomial/coefficient content, ignoring the label `a`.
    pub fn same_terms(&self, other: &MomentPolynomial) -> bool {
        self.terms == other.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_construction() {
        let a = make_multi_index(&[2, 3, 1]).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.total_degree(), 6);

        let a = make_multi_index(&[0]).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.total_degree(), 0);

        let err = make_multi_index(&[2, -1]).unwrap_err();
        assert_eq!(err, MomentError::NegativeExponent { position: 2 });
        assert_eq!(err.to_string(), "negative exponent at position 2");

        assert_eq!(
            make_multi_index(&[]).unwrap_err(),
            MomentError::EmptyMultiIndex
        );
    }

    #[test]
    fn pair_matrix_is_symmetric_for_small_n() {
        for n in 1..=5 {
            let entries: Vec<u32> = (0..triangle_len(n) as u32).map(|v| v * 7 + 1).collect();
            let l = PairExponentMatrix::from_upper(n, entries.clone()).unwrap();
            let mut seen = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(l.get(i, j), l.get(j, i));
                    if i <= j {
                        seen.push(l.get(i, j));
                    }
                }
            }
            assert_eq!(seen, entries);
            let diag: u64 = (0..n).map(|k| l.get(k, k) as u64).sum();
            assert_eq!(l.diag_sum(), diag);
        }
    }

    #[test]
    fn set_either_orientation() {
        let mut l = PairExponentMatrix::zeros(3);
        l.set(2, 0, 4);
        assert_eq!(l.get(0, 2), 4);
        assert_eq!(l.upper(), &[0, 0, 4, 0, 0, 0]);
        assert_eq!(l.leading_block(2).upper(), &[0, 0, 0]);
    }

    #[test]
    fn canonical_order_is_row_major_upper_triangle() {
        let pos: Vec<_> = triangle_positions(3).collect();
        assert_eq!(pos, vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]);
    }

    #[test]
    fn from_terms_merges_and_sorts() {
        let a = MultiIndex::new(vec![1, 1]).unwrap();
        let l1 = PairExponentMatrix::from_pairs(2, &[(0, 1, 1)]).unwrap();
        let l0 = PairExponentMatrix::zeros(2);
        let p = MomentPolynomial::from_terms(
            a,
            vec![
                MomentTerm {
                    l: l1.clone(),
                    d: 2.into(),
                    residual: vec![0, 0],
                },
                MomentTerm {
                    l: l0.clone(),
                    d: 1.into(),
                    residual: vec![1, 1],
                },
                MomentTerm {
                    l: l1.clone(),
                    d: 3.into(),
                    residual: vec![0, 0],
                },
                MomentTerm {
                    l: l0,
                    d: 0.into(),
                    residual: vec![0, 0],
                },
            ],
        );
        assert_eq!(p.len(), 2);
        assert_eq!(p.terms()[1].d, 5.into());
    }
}
