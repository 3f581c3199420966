//! Seeded sampling estimate next to the exact value.
//!
//!     cargo run --release --example monte_carlo -- 1000000 42

use gaussian_moments::oracles::mc_estimate;
use gaussian_moments::scalar::rational_to_f64;
use gaussian_moments::{make_gaussian_spec, moment, MultiIndex};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> gaussian_moments::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples: u64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let spec = make_gaussian_spec(
        vec![r(1, 2), r(0, 1)],
        vec![vec![r(1, 1), r(1, 2)], vec![r(1, 2), r(1, 1)]],
    )?;

    for a in [vec![2, 2], vec![3, 1], vec![4, 0], vec![2, 4]] {
        let a = MultiIndex::new(a)?;
        let exact = rational_to_f64(&moment(&a, &spec)?);
        let mc = mc_estimate(&a, &spec.to_float(), samples, seed)?;
        println!(
            "a = {a}: exact {exact:.6}  estimate {:.6} +/- {:.6}  z = {:+.2}",
            mc.estimate,
            mc.std_error,
            (mc.estimate - exact) / mc.std_error
        );
    }
    Ok(())
}
