use crate::scalar::MomentField;
use crate::types::MultiIndex;

/// Central moment as a sum over perfect matchings of the expanded multiset
/// (variable `k` repeated `a_k` times) of the product of matched covariances.
/// Zero for odd total degree.
pub fn isserlis_sum<T: MomentField>(a: &MultiIndex, cov: &[Vec<T>]) -> T {
    assert_eq!(
        cov.len(),
        a.dim(),
        "covariance dimension must match the exponent vector"
    );
    let labels: Vec<usize> = a
        .exponents()
        .iter()
        .enumerate()
        .flat_map(|(k, &e)| std::iter::repeat_n(k, e as usize))
        .collect();
    if labels.len() % 2 == 1 {
        return T::zero();
    }
    let mut used = vec![false; labels.len()];
    pair_first(&labels, &mut used, cov)
}

fn pair_first<T: MomentField>(labels: &[usize], used: &mut [bool], cov: &[Vec<T>]) -> T {
    let Some(first) = used.iter().position(|&u| !u) else {
        return T::one();
    };
    used[first] = true;
    let mut total = T::zero();
    for partner in first + 1..labels.len() {
        if used[partner] {
            continue;
        }
        let weight = &cov[labels[first]][labels[partner]];
        if weight.is_zero() {
            continue;
        }
        used[partner] = true;
        let rest = pair_first(labels, used, cov);
        used[partner] = false;
        total = total.add(&weight.mul(&rest));
    }
    used[first] = false;
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn three_matchings_of_four_distinct() {
        // Distinct primes make each matching product identifiable.
        let mut cov = vec![vec![1.0f64; 4]; 4];
        let vals = [
            ((0, 1), 2.0),
            ((0, 2), 3.0),
            ((0, 3), 5.0),
            ((1, 2), 7.0),
            ((1, 3), 11.0),
            ((2, 3), 13.0),
        ];
        for ((i, j), v) in vals {
            cov[i][j] = v;
            cov[j][i] = v;
        }
        let got = isserlis_sum(&mi(&[1, 1, 1, 1]), &cov);
        assert_eq!(got, 2.0 * 13.0 + 3.0 * 11.0 + 5.0 * 7.0);
    }

    #[test]
    fn fourth_power() {
        assert_eq!(isserlis_sum(&mi(&[4]), &[vec![1.0]]), 3.0);
    }

    #[test]
    fn odd_degree_vanishes() {
        let cov = vec![
            vec![1.0, 0.5, 0.2],
            vec![0.5, 1.0, 0.1],
            vec![0.2, 0.1, 1.0],
        ];
        assert_eq!(isserlis_sum(&mi(&[1, 1, 1]), &cov), 0.0);
    }
}
