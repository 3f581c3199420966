//! Raw moments of a single normal variable, with the per-term coefficients.
//!
//!     cargo run --example univariate_moments

use gaussian_moments::{
    build_polynomial, make_gaussian_spec, moment, to_symbolic, MultiIndex, SymbolicFormat,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> gaussian_moments::Result<()> {
    let mean = BigRational::new(BigInt::from(1), BigInt::from(2));
    let var = BigRational::from_integer(BigInt::from(2));
    let spec = make_gaussian_spec(vec![mean], vec![vec![var]])?;

    for degree in 0..=8u32 {
        let a = MultiIndex::new(vec![degree])?;
        let poly = build_polynomial(&a)?;
        let value: BigRational = moment(&a, &spec)?;
        println!(
            "E{{X^{degree}}} = {}",
            to_symbolic(&poly, SymbolicFormat::Text)
        );
        println!("         = {value}   (mu = 1/2, phi = 2)");
    }
    Ok(())
}
