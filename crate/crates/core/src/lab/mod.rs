//! Finite-N ensembles and Monte Carlo estimates.

pub mod ensemble;
pub mod matrix;
pub mod rng;
pub mod traces;
pub mod traffic;
pub mod validity;

pub use ensemble::{ensemble_parameter, ensemble_sequence, sample_matrix, CustomEnsemble, EnsembleSpec, MatrixSample, WeightLaw};
pub use matrix::{operator_norm, DenseMatrix, SymMatrix};
pub use rng::{child_seed, letter_seed};
pub use traces::{
    empirical_phi, hadamard_trace, normalized_trace, replicate_bindings, simulate, word_diagonal, Bindings, Estimate,
    SimulationConfig, SimulationResult,
};
pub use traffic::{empirical_traffic_trace, labeling_sum, ms_bound_check, MsBound, DEFAULT_LABELING_CAP};
pub use validity::{validate_parameter, Minor, ParameterValidity};
