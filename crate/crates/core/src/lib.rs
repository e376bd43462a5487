//! Minimax mean-square-error estimation for periodically correlated
//! processes.
//!
//! The pipeline: block a weight function `a(t)` into period-length pieces,
//! expand the blocks in an interleaved exponential basis, assemble the
//! Hermitian block operator of the estimation problem, take its largest
//! eigenvalue `nu^2` (the saddle value is `P * nu^2`), build the
//! least-favorable one-sided moving average from the top eigenvector, and
//! verify the value by simulation.
//!
//! With the default `parallel` feature, block assembly, frequency sweeps and
//! Monte Carlo replicates run on rayon; disabling it leaves sequential loops
//! with identical outputs.

pub mod blocking;
pub mod eigen;
pub mod error;
pub mod leastfav;
pub mod linalg;
pub mod montecarlo;
pub mod operator;
pub mod parallel;
pub mod rng;
pub mod weight;

pub use blocking::{
    block_function, check_summability, fourier_coefficients, frequency, AdmissibilityReport,
    BlockedFunction, FourierBlockCoefficients, TailModel,
};
pub use eigen::{
    dense_hermitian_eigen, power_iteration, solve_top_eigen, top_eigen_gap, EigenSettings,
    Eigenpair, TopEigenSolution,
};
pub use error::{Error, Result};
pub use leastfav::{
    build_least_favorable, spectral_density, trace_power, uniform_lambda_grid,
    verify_factorization, MovingAverageModel, SpectralDensitySample,
};
pub use montecarlo::{
    empirical_pc_covariance, functional_value, mc_mse, mc_mse_with_target, optimal_estimate,
    population_mse, realize_sequence, simulate_innovations, synthesize_pc_path, upper_bound_grid,
    InnovationLaw, InnovationStream, MonteCarloReport, PcPath, SequenceRealization,
};
pub use operator::{
    assemble_dn, assemble_q_truncated, assemble_q_truncated_factored, assemble_qn,
    assemble_qn_factored, BlockOperator, MirrorMatrix,
};
pub use weight::{load_weight_csv, WeightFunction};
