//! With a block-diagonal covariance the moment splits into a product of
//! block moments.
//!
//!     cargo run --example block_factorization

use gaussian_moments::{make_gaussian_spec, moment, MultiIndex};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> gaussian_moments::Result<()> {
    let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let z = || r(0, 1);
    let spec = make_gaussian_spec(
        vec![r(1, 2), r(-1, 1), r(1, 3), r(2, 1)],
        vec![
            vec![r(2, 1), z(), r(1, 3), z()],
            vec![z(), r(1, 1), z(), r(-1, 2)],
            vec![r(1, 3), z(), r(1, 1), z()],
            vec![z(), r(-1, 2), z(), r(3, 1)],
        ],
    )?;
    let a = MultiIndex::new(vec![2, 1, 3, 2])?;

    let whole: BigRational = moment(&a, &spec)?;
    let blocks = spec.covariance_blocks();
    let mut product = r(1, 1);
    for block in &blocks {
        let part: BigRational = moment(&a.select(block)?, &spec.restrict(block))?;
        println!(
            "block {:?}: {part}",
            block.iter().map(|k| k + 1).collect::<Vec<_>>()
        );
        product *= part;
    }
    println!("whole   : {whole}");
    println!("product : {product}");
    assert_eq!(whole, product);
    Ok(())
}
