//! The formula against the integration-by-parts recurrence, the pairing sum
//! and the coefficient recursion, on a random rational spec.
//!
//!     cargo run --example cross_check_oracles

use gaussian_moments::oracles::{isserlis_sum, stein_moment};
use gaussian_moments::{
    coefficient_closed_form, coefficient_recursive, enumerate_support, make_gaussian_spec, moment,
    MultiIndex,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn main() -> gaussian_moments::Result<()> {
    let spec = make_gaussian_spec(
        vec![r(1, 2), r(-1, 3), r(2, 1)],
        vec![
            vec![r(2, 1), r(1, 2), r(-1, 4)],
            vec![r(1, 2), r(1, 1), r(1, 3)],
            vec![r(-1, 4), r(1, 3), r(3, 2)],
        ],
    )?;
    let a = MultiIndex::new(vec![2, 3, 1])?;

    let formula: BigRational = moment(&a, &spec)?;
    let recurrence = stein_moment(&a, &spec);
    println!("formula    : {formula}");
    println!("recurrence : {recurrence}");
    assert_eq!(formula, recurrence);

    let centered = spec.centered();
    let central: BigRational = moment(&a, &centered)?;
    let pairs = isserlis_sum(&a, centered.cov_rows());
    println!("central    : {central} (pairings: {pairs})");
    assert_eq!(central, pairs);

    let mut n = 0;
    for l in enumerate_support(&a) {
        assert_eq!(
            coefficient_closed_form(&a, &l)?,
            coefficient_recursive(&a, &l)?
        );
        n += 1;
    }
    println!("coefficients: closed form == recursion on all {n} terms");
    Ok(())
}
