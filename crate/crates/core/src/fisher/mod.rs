//! Interval Fisher discriminant directions.
//!
//! The between and within inertia of a Moore projection `a'x` decompose into
//! centre and range scatter terms, `a'B_C a + delta |a|'B_R |a|` over
//! `a'W_C a + delta |a|'W_R |a|`. Directions maximising this ratio are found one
//! at a time under the normalisation `a'Ma = 1` and `M`-orthogonality to the
//! previous directions.

mod basis;
mod ratio;
mod scatter;
mod sqp;

pub use basis::{solve_basis, DiscriminantBasis, FisherConfig};
pub use ratio::{fisher_ratio, fisher_ratio_gradient, fisher_ratio_with_gradient};
pub use scatter::{orthogonality_matrix, scatter, OrthogonalityMode, ScatterSet};
