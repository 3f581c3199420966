//! Independent reference computations for Gaussian product moments.
//!
//! Nothing here touches the support enumerator or the coefficient formulas;
//! only the shared index and spec types are used.

mod isserlis;
mod sampling;
mod stein;

pub use isserlis::isserlis_sum;
pub use sampling::{cholesky, mc_estimate, McReport, PSD_PIVOT_TOLERANCE};
pub use stein::stein_moment;
