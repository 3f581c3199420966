//! Differentiating the moment polynomial in an off-diagonal covariance
//! lowers both exponents: d/dphi_ij P_a = a_i a_j P_{a - e_i - e_j}.
//!
//!     cargo run --example covariance_derivative

use gaussian_moments::{
    build_polynomial, differentiate_wrt_cov, to_symbolic, MultiIndex, SymbolicFormat,
};

fn main() -> gaussian_moments::Result<()> {
    let a = MultiIndex::new(vec![2, 2, 1])?;
    println!(
        "P{a} = {}",
        to_symbolic(&build_polynomial(&a)?, SymbolicFormat::Text)
    );
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = differentiate_wrt_cov(&a, i, j)?;
        let lower = a.lowered_pair(i, j).expect("positive exponents");
        let rhs = build_polynomial(&lower)?.scaled(a.get(i) as u64 * a.get(j) as u64);
        println!(
            "d/dc{}{}: {}   [{} * P{lower}: {}]",
            i + 1,
            j + 1,
            to_symbolic(&d, SymbolicFormat::Text),
            a.get(i) * a.get(j),
            if d.same_terms(&rhs) {
                "equal"
            } else {
                "DIFFERENT"
            }
        );
    }
    Ok(())
}
