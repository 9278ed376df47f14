//! Batch drivers: trajectory suites, noise sweeps, Trotter depth search,
//! depth fits and resource extrapolation.

pub mod depth;
pub mod fit;
pub mod reference;
pub mod resources;
pub mod suite;

pub use depth::{trotter_depth_search, DepthSearchOptions, DepthSearchResult, SearchMode, TrotterProduct};
pub use fit::{average_by_x, fit_depths, FitResult};
pub use resources::{extrapolate_advantage, resource_counts, AdvantageReport, ExtrapolationParams, RegimeFits, ResourceCounts, ResourceEstimate};
pub use suite::{noise_sweep, run_trajectory_suite, summarize, write_suite, NoiseSweep, NoiseSweepOptions, NoiseSweepRow, SuiteRun, SuiteSummaryRow};
