//! The Schwinger–Dyson route: a memoized recursion on `Φ^(K)` and the
//! formal resolvent series of a single heavy matrix.

pub mod decomp;
pub mod key;
pub mod series;
pub mod solver;

pub use decomp::{all_decompositions, enumerate_decompositions, Decomposition};
pub use key::{MomentKey, Normalized};
pub use series::{series_g, series_vs_sd_report, SeriesMismatch, SeriesReport, SeriesTable};
pub use solver::{sd_phi, SdSolver};
