//! Assembly and evaluation of the moment polynomial
//! `sum_{l in S_a} d_{a,l} prod_{i<=j} phi_ij^{l_ij} prod_j mu_j^{L_j}`.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::coefficients::{closed_form_parts, shared_factorials, Factorials};
use crate::error::{MomentError, Result};
use crate::scalar::{MomentField, NumericMode, Scalar, TermSum};
use crate::spec::{ExactSpec, GaussianSpec};
use crate::support::{enumerate_support, partition_support, SupportIterator};
use crate::types::{
    triangle_positions, BigCoefficient, MomentPolynomial, MomentTerm, MultiIndex,
    PairExponentMatrix,
};

/// Materializes one term per `l` in `S_a`, in canonical order.
pub fn build_polynomial(a: &MultiIndex) -> Result<MomentPolynomial> {
    let fact = shared_factorials(a.max_exponent() as usize);
    let n = a.dim();
    let mut it = enumerate_support(a);
    let mut terms = Vec::new();
    while it.advance() {
        let d = closed_form_parts(
            &fact,
            a.exponents(),
            it.current_entries(),
            it.current_residuals(),
            n,
        )?;
        terms.push(MomentTerm {
            l: it.current(),
            d: BigCoefficient(d),
            residual: it.current_residuals().to_vec(),
        });
    }
    Ok(MomentPolynomial::from_canonical(a.clone(), terms))
}

/// Powers `phi_ij^0..=cap` and `mu_j^0..=a_j`, so that each term costs
/// only multiplications of cached values.
struct PowerTable<T> {
    cov: Vec<Vec<T>>,
    mean: Vec<Vec<T>>,
}

impl<T: MomentField> PowerTable<T> {
    fn new(a: &MultiIndex, spec: &GaussianSpec<T>) -> Self {
        let powers = |x: &T, cap: u32| {
            let mut v = Vec::with_capacity(cap as usize + 1);
            v.push(T::one());
            for k in 1..=cap as usize {
                let next = v[k - 1].mul(x);
                v.push(next);
            }
            v
        };
        let e = a.exponents();
        let cov = triangle_positions(a.dim())
            .map(|(i, j)| {
                let cap = if i == j { e[i] / 2 } else { e[i].min(e[j]) };
                powers(spec.cov(i, j), cap)
            })
            .collect();
        let mean = (0..a.dim()).map(|j| powers(spec.mean(j), e[j])).collect();
        PowerTable { cov, mean }
    }

    fn term(&self, d: &T, entries: &[u32], residuals: &[u32]) -> T {
        let mut acc = d.clone();
        for (p, &l) in entries.iter().enumerate() {
            if l > 0 {
                acc = acc.mul(&self.cov[p][l as usize]);
            }
        }
        for (j, &r) in residuals.iter().enumerate() {
            if r > 0 {
                acc = acc.mul(&self.mean[j][r as usize]);
            }
        }
        acc
    }
}

/// Evaluates a materialized polynomial, folding terms in canonical order.
pub fn evaluate<T: MomentField>(poly: &MomentPolynomial, spec: &GaussianSpec<T>) -> Result<T> {
    let a = poly.multi_index();
    spec.check_dim(a.dim())?;
    let table = PowerTable::new(&max_index(poly), spec);
    let mut sum = T::Sum::default();
    for term in poly.terms() {
        sum.add(table.term(
            &T::from_biguint(term.d.value()),
            term.l.upper(),
            &term.residual,
        ));
    }
    Ok(sum.total())
}

// Power caps large enough for every term of `poly`, which after
// differentiation need not match its label.
fn max_index(poly: &MomentPolynomial) -> MultiIndex {
    let n = poly.multi_index().dim();
    let mut caps = poly.multi_index().exponents().to_vec();
    for t in poly.terms() {
        for k in 0..n {
            let used: u32 = (0..n).map(|j| t.l.get(j, k)).sum::<u32>() + t.l.get(k, k);
            caps[k] = caps[k].max(used + t.residual[k]);
        }
    }
    MultiIndex::new(caps).expect("nonempty")
}

fn fold_stream<T: MomentField>(
    a: &MultiIndex,
    mut it: SupportIterator,
    fact: &Factorials,
    table: &PowerTable<T>,
) -> Result<T::Sum> {
    let mut sum = T::Sum::default();
    while it.advance() {
        let d = closed_form_parts(
            fact,
            a.exponents(),
            it.current_entries(),
            it.current_residuals(),
            a.dim(),
        )?;
        sum.add(table.term(
            &T::from_biguint(&d),
            it.current_entries(),
            it.current_residuals(),
        ));
    }
    Ok(sum)
}

/// `E{prod X_i^{a_i}}`, streaming over `S_a` without building the polynomial.
pub fn moment<T: MomentField>(a: &MultiIndex, spec: &GaussianSpec<T>) -> Result<T> {
    spec.check_dim(a.dim())?;
    let fact = shared_factorials(a.max_exponent() as usize);
    let table = PowerTable::new(a, spec);
    fold_stream(a, enumerate_support(a), &fact, &table).map(TermSum::total)
}

/// Parallel variant of [`moment`]. `S_a` is partitioned on its leading
/// canonical entries; partial sums are combined in partition order, so the
/// result does not depend on the thread count. Exact results equal
/// [`moment`]; float results may differ from it in the last bits.
pub fn moment_parallel<T: MomentField>(a: &MultiIndex, spec: &GaussianSpec<T>) -> Result<T> {
    spec.check_dim(a.dim())?;
    let fact = shared_factorials(a.max_exponent() as usize);
    let table = PowerTable::new(a, spec);
    let total_positions = triangle_positions(a.dim()).count();
    let mut depth = 1;
    let mut parts = partition_support(a, depth);
    while parts.len() < 64 && depth < total_positions {
        depth += 1;
        parts = partition_support(a, depth);
    }
    let partial: Vec<Result<T::Sum>> = parts
        .into_par_iter()
        .map(|it| fold_stream(a, it, &fact, &table))
        .collect();
    let mut sum = T::Sum::default();
    for p in partial {
        sum.merge(p?);
    }
    Ok(sum.total())
}

/// Evaluates against an exact spec in the requested mode.
pub fn moment_in_mode(
    a: &MultiIndex,
    spec: &ExactSpec,
    mode: NumericMode,
    parallel: bool,
) -> Result<Scalar> {
    Ok(match (mode, parallel) {
        (NumericMode::Exact, false) => Scalar::Exact(moment::<BigRational>(a, spec)?),
        (NumericMode::Exact, true) => Scalar::Exact(moment_parallel::<BigRational>(a, spec)?),
        (NumericMode::Float, false) => Scalar::Float(moment(a, &spec.to_float())?),
        (NumericMode::Float, true) => Scalar::Float(moment_parallel(a, &spec.to_float())?),
    })
}

/// Formal partial derivative of the moment polynomial of `a` with respect
/// to the off-diagonal covariance `phi_ij` (0-based, `i != j`).
///
/// The result is labelled with `a - e_i - e_j`; when `a_i` or `a_j` is zero
/// the zero polynomial labelled `a` is returned.
pub fn differentiate_wrt_cov(a: &MultiIndex, i: usize, j: usize) -> Result<MomentPolynomial> {
    let n = a.dim();
    if i >= n || j >= n {
        return Err(MomentError::OutOfRange(format!(
            "covariance index ({}, {}) outside dimension {n}",
            i + 1,
            j + 1
        )));
    }
    if i == j {
        return Err(MomentError::Unsupported(
            "derivative with respect to a variance entry".into(),
        ));
    }
    let Some(lowered) = a.lowered_pair(i, j) else {
        return Ok(MomentPolynomial::zero(a.clone()));
    };
    let poly = build_polynomial(a)?;
    let terms = poly
        .terms()
        .iter()
        .filter(|t| t.l.get(i, j) > 0)
        .map(|t| {
            let power = t.l.get(i, j);
            let mut l: PairExponentMatrix = t.l.clone();
            l.set(i, j, power - 1);
            MomentTerm {
                l,
                d: BigCoefficient(&t.d.0 * power),
                residual: t.residual.clone(),
            }
        })
        .collect();
    Ok(MomentPolynomial::from_terms(lowered, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;
    use crate::spec::make_gaussian_spec;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn spec(mu: &[&str], cov: &[&[&str]]) -> ExactSpec {
        make_gaussian_spec(
            mu.iter().map(|s| q(s)).collect(),
            cov.iter()
                .map(|r| r.iter().map(|s| q(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn polynomial_of_11() {
        let p = build_polynomial(&mi(&[1, 1])).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.terms()[0].l.is_zero());
        assert_eq!(p.terms()[0].d, 1.into());
        assert_eq!(p.terms()[0].residual, vec![1, 1]);
        assert_eq!(p.terms()[1].l.get(0, 1), 1);
        assert_eq!(p.terms()[1].d, 1.into());
        assert_eq!(p.terms()[1].residual, vec![0, 0]);
    }

    #[test]
    fn polynomial_of_22_central_part() {
        let p = build_polynomial(&mi(&[2, 2])).unwrap();
        let central: Vec<_> = p
            .terms()
            .iter()
            .filter(|t| t.residual.iter().all(|&r| r == 0))
            .map(|t| (t.l.upper().to_vec(), t.d.clone()))
            .collect();
        // phi11 phi22 + 2 phi12^2
        assert_eq!(
            central,
            vec![(vec![0, 2, 0], 2.into()), (vec![1, 0, 1], 1.into())]
        );
    }

    #[test]
    fn evaluate_examples() {
        let s = spec(&["0"], &[&["1"]]);
        let p = build_polynomial(&mi(&[2])).unwrap();
        assert_eq!(evaluate(&p, &s).unwrap(), q("1"));

        let s = spec(
            &["0", "0", "0"],
            &[
                &["2", "1/3", "-1"],
                &["1/3", "5", "1/7"],
                &["-1", "1/7", "1"],
            ],
        );
        let p = build_polynomial(&mi(&[1, 1, 1])).unwrap();
        assert_eq!(evaluate(&p, &s).unwrap(), q("0"));

        let s = spec(&["0", "0"], &[&["1", "1/2"], &["1/2", "1"]]);
        let p = build_polynomial(&mi(&[2, 2])).unwrap();
        assert_eq!(evaluate(&p, &s).unwrap(), q("3/2"));
        assert_eq!(evaluate(&p, &s.to_float()).unwrap(), 1.5);
    }

    #[test]
    fn moment_examples() {
        let s = spec(&["3/5", "-2"], &[&["1", "1/2"], &["1/2", "1"]]);
        assert_eq!(
            moment(&mi(&[1, 1]), &s).unwrap(),
            q("1/2") + q("3/5") * q("-2")
        );

        let s = spec(&["0"], &[&["7/3"]]);
        // phi11 = sigma^2, so 3 sigma^4 = 3 phi11^2
        assert_eq!(moment(&mi(&[4]), &s).unwrap(), q("3") * q("7/3") * q("7/3"));

        let s = spec(&["3", "4"], &[&["2", "1"], &["1", "9"]]);
        assert_eq!(moment(&mi(&[0, 0]), &s).unwrap(), q("1"));
    }

    #[test]
    fn moment_dimension_mismatch() {
        let s = spec(&["0"], &[&["1"]]);
        assert!(matches!(
            moment(&mi(&[1, 1]), &s),
            Err(MomentError::DimensionMismatch { .. })
        ));
        let p = build_polynomial(&mi(&[1, 1])).unwrap();
        assert!(evaluate(&p, &s).is_err());
    }

    #[test]
    fn streaming_parallel_and_materialized_agree() {
        let s = spec(
            &["1/2", "-1", "2/3"],
            &[
                &["2", "1/3", "-1/4"],
                &["1/3", "1", "1/5"],
                &["-1/4", "1/5", "3"],
            ],
        );
        for a in [mi(&[3, 2, 1]), mi(&[0, 4, 4]), mi(&[5, 0, 0])] {
            let p = build_polynomial(&a).unwrap();
            let m = moment(&a, &s).unwrap();
            assert_eq!(evaluate(&p, &s).unwrap(), m);
            assert_eq!(moment_parallel(&a, &s).unwrap(), m);
            let f = moment(&a, &s.to_float()).unwrap();
            let exact = crate::scalar::rational_to_f64(&m);
            assert!(
                (f - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                "{a}: {f} vs {exact}"
            );
        }
    }

    #[test]
    fn derivative_examples() {
        let d = differentiate_wrt_cov(&mi(&[1, 1]), 0, 1).unwrap();
        assert!(d.same_terms(&build_polynomial(&mi(&[0, 0])).unwrap()));

        let d = differentiate_wrt_cov(&mi(&[2, 2]), 0, 1).unwrap();
        assert!(d.same_terms(&build_polynomial(&mi(&[1, 1])).unwrap().scaled(4)));
        assert_eq!(d.multi_index(), &mi(&[1, 1]));

        let d = differentiate_wrt_cov(&mi(&[1, 1, 2]), 0, 1).unwrap();
        assert!(d.same_terms(&build_polynomial(&mi(&[0, 0, 2])).unwrap()));
    }

    #[test]
    fn derivative_edge_cases() {
        assert!(differentiate_wrt_cov(&mi(&[0, 3]), 0, 1).unwrap().is_zero());
        assert!(matches!(
            differentiate_wrt_cov(&mi(&[2, 2]), 1, 1),
            Err(MomentError::Unsupported(_))
        ));
        assert!(matches!(
            differentiate_wrt_cov(&mi(&[2, 2]), 0, 2),
            Err(MomentError::OutOfRange(_))
        ));
    }
}
