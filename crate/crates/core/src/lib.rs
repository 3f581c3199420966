//! Exact product moments `E{X_1^{a_1} ... X_n^{a_n}}` of jointly Gaussian
//! variables.
//!
//! The moment is a polynomial in the means `mu_j` and covariances `phi_ij`
//! with one term per admissible symmetric exponent matrix `l`:
//!
//! ```text
//! E{prod X_i^{a_i}} = sum_{l in S_a} d_{a,l} prod_{i<=j} phi_ij^{l_ij} prod_j mu_j^{L_{a,j}}
//! L_{a,k}  = a_k - 2 l_kk - sum_{j != k} l_jk        (l in S_a iff every L_{a,k} >= 0)
//! d_{a,l}  = prod_k a_k! / (2^{sum_k l_kk} prod_{i<=j} l_ij! prod_j L_{a,j}!)
//! ```
//!
//! Modules:
//! - [`types`], [`spec`], [`scalar`]: validated inputs and numeric fields
//! - [`support`]: streaming enumeration of `S_a` in canonical order
//! - [`coefficients`]: `d_{a,l}` by closed form and by recursion
//! - [`evaluator`], [`symbolic`]: building, evaluating, differentiating and
//!   rendering the polynomial
//! - [`oracles`]: independent reference values (integration-by-parts
//!   recurrence, pairing sums, Monte Carlo)
//! - [`input`], [`cli`]: JSON spec files and the `gmoment` command line

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod coefficients;
pub mod error;
pub mod evaluator;
pub mod input;
pub mod oracles;
pub mod scalar;
pub mod spec;
pub mod support;
pub mod symbolic;
pub mod types;

pub use coefficients::{coefficient_closed_form, coefficient_recursive, coefficient_univariate};
pub use error::{MomentError, Result};
pub use evaluator::{
    build_polynomial, differentiate_wrt_cov, evaluate, moment, moment_in_mode, moment_parallel,
};
pub use scalar::{MomentField, NumericMode, Scalar};
pub use spec::{make_gaussian_spec, ExactSpec, FloatSpec, GaussianSpec};
pub use support::{count_support, enumerate_support, is_admissible, residual_degrees};
pub use symbolic::{to_symbolic, SymbolicFormat};
pub use types::{
    make_multi_index, BigCoefficient, MomentPolynomial, MomentTerm, MultiIndex, PairExponentMatrix,
    ResidualDegrees,
};
