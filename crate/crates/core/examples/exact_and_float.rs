//! The same moment in exact rational and compensated floating-point modes,
//! sequential and parallel.
//!
//!     cargo run --release --example exact_and_float

use gaussian_moments::cli::dense_bench_spec;
use gaussian_moments::{moment_in_mode, MultiIndex, NumericMode};

fn main() -> gaussian_moments::Result<()> {
    let a = MultiIndex::new(vec![3, 3, 3, 3])?;
    let spec = dense_bench_spec(4);

    let exact = moment_in_mode(&a, &spec, NumericMode::Exact, false)?;
    let exact_par = moment_in_mode(&a, &spec, NumericMode::Exact, true)?;
    let float = moment_in_mode(&a, &spec, NumericMode::Float, false)?;
    assert_eq!(exact, exact_par);

    println!("exact  : {exact}");
    println!("as f64 : {:e}", exact.to_f64());
    println!("float  : {:e}", float.to_f64());
    println!(
        "rel err: {:e}",
        (float.to_f64() - exact.to_f64()).abs() / exact.to_f64().abs()
    );
    Ok(())
}
