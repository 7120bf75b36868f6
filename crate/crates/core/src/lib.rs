//! Numerical workbench for composition operators on the Wiener algebra of
//! absolutely convergent Dirichlet series.
//!
//! The crate builds the symbols of interest as evaluatable conformal maps,
//! computes the `A⁺` norms of their basis images `N^{-φ}` (truncated sums and
//! Hardy-inequality certificates), boundary arclengths, `Hᵖ` norms and
//! boundary-limit probes, and aggregates everything into verification
//! reports. Logarithms are natural throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod disk;
pub mod error;
mod fft;
pub mod harness;
pub mod norms;
pub mod probes;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod symbols;

pub use disk::{DiskPoint, Quarter};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{AnalyticKind, BoundarySampling, SeriesConfig, TruncatedSeries};
pub use symbols::{Region, SymbolHandle, SymbolSpec};
