//! Walking the admissible exponent matrices of a multi-index, and the term
//! counts for a few shapes.
//!
//!     cargo run --example support_enumeration

use gaussian_moments::support::partition_support;
use gaussian_moments::{count_support, enumerate_support, MultiIndex};

fn main() -> gaussian_moments::Result<()> {
    let a = MultiIndex::new(vec![1, 1, 1, 1])?;
    println!("S_a for a = {a}:");
    let mut it = enumerate_support(&a);
    while it.advance() {
        println!(
            "  l = {:?}  L = {:?}",
            it.current_entries(),
            it.current_residuals()
        );
    }

    for shape in [
        vec![2, 2],
        vec![2, 3, 1],
        vec![3, 3, 3, 3],
        vec![4, 4, 4, 4],
        vec![6, 6, 6, 6, 6],
    ] {
        let a = MultiIndex::new(shape)?;
        let parts = partition_support(&a, 2);
        println!(
            "|S_{a}| = {} ({} partitions on the first two entries)",
            count_support(&a),
            parts.len()
        );
    }
    Ok(())
}
