//! Interval Fisher discriminant analysis.
//!
//! Interval-valued observations are compared with the Mallows (L2-Wasserstein)
//! distance. Discriminant directions maximise a between/within inertia ratio
//! that weighs centres and ranges, observations are classified by the nearest
//! projected class barycentre, and a set of diagnostics (farness, DAC,
//! silhouettes, stacked mosaics) describes the result.

pub mod classifier;
pub mod diagnostics;
pub mod error;
pub mod fisher;
pub mod interval;
pub mod io;
pub mod plots;
pub mod simulate;

pub use error::{Error, Result};
pub use interval::{IntervalFrame, IntervalVector, Labels, LatentSpec, NamedDistribution};
