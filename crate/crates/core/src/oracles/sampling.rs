use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{MomentError, Result};
use crate::spec::FloatSpec;
use crate::types::MultiIndex;

/// Pivots in `[-tol, 0]` are clamped to zero; anything below fails.
pub const PSD_PIVOT_TOLERANCE: f64 = 1e-10;

/// Fixed shard count so estimates do not depend on the thread pool size.
const SHARDS: u64 = 16;

/// Lower-triangular `L` with `L L^T = cov`, tolerating semidefinite input.
pub fn cholesky(cov: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = cov.len();
    if cov.iter().any(|r| r.len() != n) {
        return Err(MomentError::NotSquare);
    }
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let pivot = cov[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if pivot < -PSD_PIVOT_TOLERANCE {
            return Err(MomentError::NotPositiveSemidefinite { row: j + 1, pivot });
        }
        let diag = pivot.max(0.0).sqrt();
        l[j][j] = diag;
        for i in j + 1..n {
            let s = cov[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = if diag > 0.0 { s / diag } else { 0.0 };
        }
    }
    Ok(l)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McReport {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McReport {
    /// Whether `exact` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.estimate - exact).abs() <= k * self.std_error
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Welford { count, mean, m2 }
    }
}

/// Box-Muller standard normals from a uniform source.
struct NormalSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSource {
    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - U keeps the log argument in (0, 1].
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Averages `prod x_i^{a_i}` over `n_samples` draws of `mu + L z`.
///
/// Samples are split over a fixed number of shards, each with its own
/// ChaCha stream derived from `seed`, and combined in shard order; the
/// result is reproducible for a given `(seed, n_samples)`.
pub fn mc_estimate(
    a: &MultiIndex,
    spec: &FloatSpec,
    n_samples: u64,
    seed: u64,
) -> Result<McReport> {
    spec.check_dim(a.dim())?;
    if n_samples < 2 {
        return Err(MomentError::OutOfRange(
            "Monte Carlo needs at least 2 samples".into(),
        ));
    }
    let factor = cholesky(spec.cov_rows())?;
    let n = a.dim();
    let exps: Vec<i32> = a
        .exponents()
        .iter()
        .map(|&e| {
            i32::try_from(e).map_err(|_| MomentError::OutOfRange("exponent too large".into()))
        })
        .collect::<Result<_>>()?;

    let per_shard = n_samples / SHARDS;
    let extra = n_samples % SHARDS;
    let shards: Vec<Welford> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = per_shard + u64::from(shard < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut normals = NormalSource { rng, spare: None };
            let mut z = vec![0.0; n];
            let mut acc = Welford::default();
            for _ in 0..count {
                z.iter_mut().for_each(|v| *v = normals.next());
                let mut product = 1.0;
                for i in 0..n {
                    if exps[i] == 0 {
                        continue;
                    }
                    let x = spec.mean(i) + (0..=i).map(|k| factor[i][k] * z[k]).sum::<f64>();
                    product *= x.powi(exps[i]);
                }
                acc.push(product);
            }
            acc
        })
        .collect();

    let total = shards.into_iter().fold(Welford::default(), Welford::merge);
    let variance = total.m2 / (total.count - 1) as f64;
    Ok(McReport {
        estimate: total.mean,
        std_error: (variance / total.count as f64).sqrt(),
        n_samples,
        seed,
    })
}
