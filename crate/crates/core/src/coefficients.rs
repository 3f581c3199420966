//! Exact coefficients `d_{a,l}` of the moment polynomial.
//!
//! Two independent routes are provided: the closed-form factorial ratio and
//! a recursion that peels off the last coordinate, factoring its coupling to
//! the others into a multinomial prefactor and its self-pairing into the
//! univariate coefficient. Both use exact big-integer arithmetic.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{MomentError, Result};
use crate::support::residual_degrees;
use crate::types::{BigCoefficient, MultiIndex, PairExponentMatrix};

/// Table of `0!, 1!, ..., N!`.
#[derive(Debug, Clone)]
pub struct Factorials {
    table: Vec<BigUint>,
}

impl Factorials {
    pub fn up_to(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(BigUint::one());
        for k in 1..=n {
            let next = &table[k - 1] * BigUint::from(k);
            table.push(next);
        }
        Factorials { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    #[inline]
    pub fn get(&self, k: usize) -> &BigUint {
        &self.table[k]
    }
}

static SHARED: OnceLock<RwLock<Arc<Factorials>>> = OnceLock::new();

/// Process-wide memo covering at least `0..=n`. The table only ever grows;
/// callers hold an immutable snapshot.
pub fn shared_factorials(n: usize) -> Arc<Factorials> {
    let cell = SHARED.get_or_init(|| RwLock::new(Arc::new(Factorials::up_to(32))));
    {
        let current = cell.read().expect("factorial table poisoned");
        if current.max() >= n {
            return Arc::clone(&current);
        }
    }
    let mut guard = cell.write().expect("factorial table poisoned");
    if guard.max() < n {
        let target = n.max(2 * guard.max());
        *guard = Arc::new(Factorials::up_to(target));
    }
    Arc::clone(&guard)
}

fn exact_div(numer: BigUint, denom: &BigUint, what: &str) -> Result<BigUint> {
    let (q, r) = numer.div_rem(denom);
    if !r.is_zero() {
        return Err(MomentError::Invariant(format!(
            "{what}: non-exact division"
        )));
    }
    Ok(q)
}

/// Closed form from raw parts: upper-triangle entries in canonical order and
/// nonnegative residuals. No admissibility check.
pub(crate) fn closed_form_parts(
    fact: &Factorials,
    a: &[u32],
    entries: &[u32],
    residuals: &[u32],
    n: usize,
) -> Result<BigUint> {
    let mut numer = BigUint::one();
    for &ak in a {
        if ak > 1 {
            numer *= fact.get(ak as usize);
        }
    }
    let mut diag = 0u64;
    let mut denom = BigUint::one();
    let mut at = 0;
    for i in 0..n {
        diag += entries[at] as u64;
        for _ in i..n {
            if entries[at] > 1 {
                denom *= fact.get(entries[at] as usize);
            }
            at += 1;
        }
    }
    for &r in residuals {
        if r > 1 {
            denom *= fact.get(r as usize);
        }
    }
    denom <<= diag;
    exact_div(numer, &denom, "closed-form coefficient")
}

fn check_admissible(a: &MultiIndex, l: &PairExponentMatrix) -> Result<Vec<u32>> {
    residual_degrees(a, l)?
        .to_unsigned()
        .ok_or(MomentError::Inadmissible)
}

/// `d_{a,l} = prod a_k! / (2^{M_l} prod_{i<=j} l_ij! prod_j L_{a,j}!)`.
pub fn coefficient_closed_form(a: &MultiIndex, l: &PairExponentMatrix) -> Result<BigCoefficient> {
    let residuals = check_admissible(a, l)?;
    let fact = shared_factorials(a.max_exponent() as usize);
    closed_form_parts(&fact, a.exponents(), l.upper(), &residuals, a.dim()).map(BigCoefficient)
}

/// `a! / (2^l l! (a - 2l)!)`, the one-variable coefficient.
pub fn coefficient_univariate(a1: u32, l: u32) -> Result<BigCoefficient> {
    if 2 * (l as u64) > a1 as u64 {
        return Err(MomentError::OutOfRange(format!(
            "univariate pair count {l} exceeds floor({a1}/2)"
        )));
    }
    let fact = shared_factorials(a1 as usize);
    let denom = (fact.get(l as usize) * fact.get((a1 - 2 * l) as usize)) << l;
    exact_div(
        fact.get(a1 as usize).clone(),
        &denom,
        "univariate coefficient",
    )
    .map(BigCoefficient)
}

/// Same value as [`coefficient_closed_form`], computed by stripping the last
/// coordinate `m` at each level:
///
/// ```text
/// d_a(l) = [prod_{k<m} a_k! / (l_km! (a_k - l_km)!)] * a_m! / (a_m - sum_k l_km)!
///          * d_{a'}(l') * d_univariate(a_m - sum_k l_km, l_mm)
/// ```
///
/// where `a'_k = a_k - l_km` and `l'` is the leading `(m-1)`-block of `l`.
pub fn coefficient_recursive(a: &MultiIndex, l: &PairExponentMatrix) -> Result<BigCoefficient> {
    check_admissible(a, l)?;
    recurse(a.exponents(), l).map(BigCoefficient)
}

fn recurse(a: &[u32], l: &PairExponentMatrix) -> Result<BigUint> {
    let m = a.len();
    let last = m - 1;
    if m == 1 {
        return coefficient_univariate(a[0], l.get(0, 0)).map(|c| c.0);
    }
    let fact = shared_factorials(a.iter().copied().max().unwrap_or(0) as usize);

    let coupled: u32 = (0..last).map(|k| l.get(k, last)).sum();
    let a_last_rest = a[last]
        .checked_sub(coupled)
        .ok_or(MomentError::Inadmissible)?;

    let mut numer = fact.get(a[last] as usize).clone();
    let mut denom = fact.get(a_last_rest as usize).clone();
    let mut reduced = Vec::with_capacity(last);
    for k in 0..last {
        let lkm = l.get(k, last);
        let rest = a[k].checked_sub(lkm).ok_or(MomentError::Inadmissible)?;
        numer *= fact.get(a[k] as usize);
        denom *= fact.get(lkm as usize) * fact.get(rest as usize);
        reduced.push(rest);
    }
    let prefactor = exact_div(numer, &denom, "recursion prefactor")?;

    let inner = recurse(&reduced, &l.leading_block(last))?;
    let own = coefficient_univariate(a_last_rest, l.get(last, last))?;
    Ok(prefactor * inner * own.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::enumerate_support;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn c(v: u64) -> BigCoefficient {
        v.into()
    }

    #[test]
    fn closed_form_examples() {
        let l = PairExponentMatrix::from_pairs(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(coefficient_closed_form(&mi(&[1, 1]), &l).unwrap(), c(1));
        // 2!2!/(2^0 2! 0! 0!)
        let l = PairExponentMatrix::from_pairs(2, &[(0, 1, 2)]).unwrap();
        assert_eq!(coefficient_closed_form(&mi(&[2, 2]), &l).unwrap(), c(2));
        // 4!/(2^2 2! 0!)
        let l = PairExponentMatrix::from_pairs(1, &[(0, 0, 2)]).unwrap();
        assert_eq!(coefficient_closed_form(&mi(&[4]), &l).unwrap(), c(3));
        for a in [mi(&[3, 1, 4]), mi(&[0]), mi(&[5, 5])] {
            let zero = PairExponentMatrix::zeros(a.dim());
            assert_eq!(coefficient_closed_form(&a, &zero).unwrap(), c(1));
        }
    }

    #[test]
    fn closed_form_rejects_inadmissible() {
        let l = PairExponentMatrix::from_pairs(2, &[(0, 0, 1)]).unwrap();
        assert_eq!(
            coefficient_closed_form(&mi(&[1, 1]), &l).unwrap_err(),
            MomentError::Inadmissible
        );
        assert_eq!(
            coefficient_recursive(&mi(&[1, 1]), &l).unwrap_err(),
            MomentError::Inadmissible
        );
    }

    #[test]
    fn univariate_examples() {
        assert_eq!(coefficient_univariate(4, 1).unwrap(), c(6));
        assert_eq!(coefficient_univariate(6, 3).unwrap(), c(15));
        assert_eq!(coefficient_univariate(0, 0).unwrap(), c(1));
        assert!(matches!(
            coefficient_univariate(3, 2),
            Err(MomentError::OutOfRange(_))
        ));
    }

    #[test]
    fn recursive_examples() {
        let l = PairExponentMatrix::from_pairs(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(coefficient_recursive(&mi(&[1, 1]), &l).unwrap(), c(1));
        let l = PairExponentMatrix::from_pairs(2, &[(0, 1, 2)]).unwrap();
        assert_eq!(coefficient_recursive(&mi(&[2, 2]), &l).unwrap(), c(2));
    }

    #[test]
    fn recursive_matches_closed_form_on_231() {
        let a = mi(&[2, 3, 1]);
        let mut seen = 0;
        for l in enumerate_support(&a) {
            assert_eq!(
                coefficient_recursive(&a, &l).unwrap(),
                coefficient_closed_form(&a, &l).unwrap(),
                "{l:?}"
            );
            seen += 1;
        }
        assert_eq!(seen, 17);
    }

    #[test]
    fn univariate_consistency() {
        for a1 in 0..=20u32 {
            for l in 0..=a1 / 2 {
                let m = PairExponentMatrix::from_pairs(1, &[(0, 0, l)]).unwrap();
                assert_eq!(
                    coefficient_closed_form(&mi(&[a1]), &m).unwrap(),
                    coefficient_univariate(a1, l).unwrap()
                );
            }
        }
    }

    #[test]
    fn large_degree_exceeds_u64() {
        // 60!/(2^30 30!) = 59!!
        let l = PairExponentMatrix::from_pairs(1, &[(0, 0, 30)]).unwrap();
        let d = coefficient_closed_form(&mi(&[60]), &l).unwrap();
        let mut df = BigUint::one();
        let mut k = 59u32;
        while k > 1 {
            df *= k;
            k -= 2;
        }
        assert_eq!(d.0, df);
        assert!(d.0.bits() > 64);
    }

    #[test]
    fn factorial_table_grows() {
        let f = shared_factorials(100);
        assert!(f.max() >= 100);
        assert_eq!(f.get(5), &BigUint::from(120u32));
    }
}
