#![allow(dead_code, clippy::needless_range_loop)]

use gaussian_moments::{make_gaussian_spec, ExactSpec, MultiIndex};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

pub fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

/// Every exponent vector of length `n` with total degree at most `max_total`.
pub fn multi_indices(n: usize, max_total: u32) -> Vec<MultiIndex> {
    fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() == n {
            out.push(MultiIndex::new(prefix.clone()).unwrap());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(prefix, n, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, max_total, &mut out);
    out
}

pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    q(rng.gen_range(-3..=3), rng.gen_range(1..=4))
}

/// `B^T B` for a random small-rational `B`, so the result is PSD exactly.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<BigRational>> {
    let b: Vec<Vec<BigRational>> = (0..n)
        .map(|_| (0..n).map(|_| small_rational(rng)).collect())
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(q(0, 1), |acc, k| acc + &b[k][i] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn random_spec<R: Rng>(rng: &mut R, n: usize) -> ExactSpec {
    let mu = (0..n).map(|_| small_rational(rng)).collect();
    make_gaussian_spec(mu, random_psd(rng, n)).unwrap()
}

/// Random exponent vector of length `n` with total degree at most `max_total`.
pub fn random_index<R: Rng>(rng: &mut R, n: usize, max_total: u32) -> MultiIndex {
    let total = rng.gen_range(0..=max_total);
    let mut a = vec![0u32; n];
    for _ in 0..total {
        a[rng.gen_range(0..n)] += 1;
    }
    MultiIndex::new(a).unwrap()
}

/// Block-diagonal spec from two independent blocks of sizes `n1`, `n2`.
pub fn block_spec<R: Rng>(rng: &mut R, n1: usize, n2: usize) -> (ExactSpec, ExactSpec, ExactSpec) {
    let b1 = random_spec(rng, n1);
    let b2 = random_spec(rng, n2);
    let n = n1 + n2;
    let mut cov = vec![vec![q(0, 1); n]; n];
    for i in 0..n1 {
        for j in 0..n1 {
            cov[i][j] = b1.cov(i, j).clone();
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            cov[n1 + i][n1 + j] = b2.cov(i, j).clone();
        }
    }
    let mu = b1.means().iter().chain(b2.means()).cloned().collect();
    (make_gaussian_spec(mu, cov).unwrap(), b1, b2)
}

/// `(A - 1)!!` by the recursion `df(A) = (A - 1) df(A - 2)`, `df(0) = 1`.
pub fn double_factorial_moment(a: u32) -> BigInt {
    if a == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(a - 1) * double_factorial_moment(a - 2)
    }
}
