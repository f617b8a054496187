//! Archetypal analysis with AA++ seeding.
//!
//! The crate covers the pieces needed to seed and fit archetypal analysis
//! and to compare seeding strategies:
//!
//! * [`simplex`]: simplex-constrained least squares (NNLS with an augmented
//!   summation row) and point-to-hull distances;
//! * [`init`]: Uniform, FurthestFirst, FurthestSum, AA++, its k-means++
//!   approximation and its Markov-chain approximation;
//! * [`aa`]: the alternating optimiser;
//! * [`dataio`]: CSV ingestion, preprocessing and synthetic data;
//! * [`harness`]: experiment grids, quantile summaries and win tables.

pub mod aa;
pub mod dataio;
pub mod error;
pub mod harness;
pub mod init;
pub mod matrix;
pub mod rng;
pub mod simplex;

pub use aa::{fit, mse, update_a, update_b, update_z_unconstrained, Fit, FitOptions, FitTrace, SimplexWeights};
pub use error::{Error, Result};
pub use init::{
    gamma_prime_fixed, init_aapp, init_aapp_mc, init_furthest_first, init_furthest_sum,
    init_kmeanspp, init_uniform, ArchetypeSet, ChainConfig, Method, Seeding,
};
pub use matrix::{sq_euclidean, DataMatrix};
pub use rng::RngStream;
pub use simplex::{batch_dist, dist_to_hull, nnls, solve_simplex_ls, SimplexProblem, SimplexSolution};
