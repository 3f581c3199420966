//! Text and LaTeX renderings of a moment polynomial and its term list.
//!
//!     cargo run --example symbolic_polynomial -- 2,2,1

use gaussian_moments::cli::parse_exponents;
use gaussian_moments::{build_polynomial, to_symbolic, SymbolicFormat};

fn main() -> gaussian_moments::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "2,2".to_string());
    let a = parse_exponents(&arg)?;
    let poly = build_polynomial(&a)?;

    println!("a = {a}, {} terms", poly.len());
    println!("text : {}", to_symbolic(&poly, SymbolicFormat::Text));
    println!("latex: {}", to_symbolic(&poly, SymbolicFormat::Latex));
    println!();
    for term in poly.terms() {
        println!(
            "d = {:>4}  l = {:?}  L = {:?}",
            term.d,
            term.l.upper(),
            term.residual
        );
    }
    Ok(())
}
