use std::collections::HashMap;

use crate::scalar::MomentField;
use crate::spec::GaussianSpec;
use crate::types::MultiIndex;

/// Moment via Gaussian integration by parts:
///
/// `E{X_k prod X_i^{b_i}} = mu_k E{prod X_i^{b_i}} + sum_j b_j phi_kj E{prod X_i^{b_i - delta_ij}}`
///
/// peeling the first coordinate with a positive exponent, memoized per call.
pub fn stein_moment<T: MomentField>(a: &MultiIndex, spec: &GaussianSpec<T>) -> T {
    assert_eq!(
        spec.dim(),
        a.dim(),
        "spec dimension must match the exponent vector"
    );
    let mut memo = HashMap::new();
    let mut b = a.exponents().to_vec();
    recurse(&mut b, spec, &mut memo)
}

fn recurse<T: MomentField>(
    b: &mut Vec<u32>,
    spec: &GaussianSpec<T>,
    memo: &mut HashMap<Vec<u32>, T>,
) -> T {
    let Some(k) = b.iter().position(|&e| e > 0) else {
        return T::one();
    };
    if let Some(v) = memo.get(b.as_slice()) {
        return v.clone();
    }
    let key = b.clone();

    b[k] -= 1;
    let mut value = T::zero();
    let mu = spec.mean(k);
    if !mu.is_zero() {
        value = value.add(&mu.mul(&recurse(b, spec, memo)));
    }
    for j in 0..b.len() {
        let bj = b[j];
        if bj == 0 || spec.cov(k, j).is_zero() {
            continue;
        }
        b[j] -= 1;
        let lower = recurse(b, spec, memo);
        b[j] += 1;
        value = value.add(&T::from_i64(bj as i64).mul(spec.cov(k, j)).mul(&lower));
    }
    b[k] += 1;

    memo.insert(key, value.clone());
    value
}
