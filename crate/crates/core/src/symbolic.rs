//! Text and LaTeX rendering of moment polynomials.
//!
//! Text mode names `phi_ij` as `c{i}{j}` and `mu_j` as `m{j}` (1-based),
//! joins factors with `*` and terms with ` + `. LaTeX mode uses
//! `\varphi_{ij}` and `\mu_{j}` with juxtaposed factors. Coefficients and
//! exponents equal to 1 are omitted. When the dimension exceeds 9 the two
//! covariance indices are separated (`c10_11`, `\varphi_{10,11}`).

use std::fmt::Write;
use std::str::FromStr;

use crate::error::MomentError;
use crate::types::{triangle_positions, MomentPolynomial, MomentTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymbolicFormat {
    #[default]
    Text,
    Latex,
}

impl FromStr for SymbolicFormat {
    type Err = MomentError;

    fn from_str(s: &str) -> Result<Self, MomentError> {
        match s {
            "text" => Ok(SymbolicFormat::Text),
            "latex" => Ok(SymbolicFormat::Latex),
            other => Err(MomentError::Parse(format!("unknown format '{other}'"))),
        }
    }
}

fn cov_symbol(format: SymbolicFormat, wide: bool, i: usize, j: usize) -> String {
    match (format, wide) {
        (SymbolicFormat::Text, false) => format!("c{i}{j}"),
        (SymbolicFormat::Text, true) => format!("c{i}_{j}"),
        (SymbolicFormat::Latex, false) => format!("\\varphi_{{{i}{j}}}"),
        (SymbolicFormat::Latex, true) => format!("\\varphi_{{{i},{j}}}"),
    }
}

fn mean_symbol(format: SymbolicFormat, j: usize) -> String {
    match format {
        SymbolicFormat::Text => format!("m{j}"),
        SymbolicFormat::Latex => format!("\\mu_{{{j}}}"),
    }
}

fn power(format: SymbolicFormat, base: String, exp: u32) -> String {
    match (exp, format) {
        (1, _) => base,
        (e, SymbolicFormat::Text) => format!("{base}^{e}"),
        (e, SymbolicFormat::Latex) => format!("{base}^{{{e}}}"),
    }
}

fn render_term(term: &MomentTerm, n: usize, format: SymbolicFormat) -> String {
    let wide = n > 9;
    let mut factors = Vec::new();
    for (p, (i, j)) in triangle_positions(n).enumerate() {
        let e = term.l.upper()[p];
        if e > 0 {
            factors.push(power(format, cov_symbol(format, wide, i + 1, j + 1), e));
        }
    }
    for (j, &e) in term.residual.iter().enumerate() {
        if e > 0 {
            factors.push(power(format, mean_symbol(format, j + 1), e));
        }
    }
    let coefficient = term.d.to_string();
    let sep = match format {
        SymbolicFormat::Text => "*",
        SymbolicFormat::Latex => "",
    };
    match (coefficient.as_str(), factors.is_empty()) {
        (_, true) => coefficient,
        ("1", false) => factors.join(sep),
        (_, false) => {
            let mut out = coefficient;
            if format == SymbolicFormat::Text {
                out.push('*');
            }
            out.push_str(&factors.join(sep));
            out
        }
    }
}

/// Deterministic rendering in canonical term order; `"0"` for the zero polynomial.
pub fn to_symbolic(poly: &MomentPolynomial, format: SymbolicFormat) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let n = poly.multi_index().dim();
    let mut out = String::new();
    for (k, term) in poly.terms().iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        let _ = write!(out, "{}", render_term(term, n, format));
    }
    out
}
