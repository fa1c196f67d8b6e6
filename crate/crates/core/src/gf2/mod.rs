//! Finite-size GF(2) machinery: ensemble sampling, encoding, exhaustive
//! search, linear solving and exact oracles.

mod bits;
mod linalg;
mod matrix;
pub mod oracles;
mod search;

pub use bits::BitVec;
pub use linalg::{nullspace, rank, xorsat_solvable, EchelonBasis, Insertion};
pub use matrix::{sample_ldgm, sample_ldpc, GeneratorMatrix, ParityMatrix};
pub use oracles::{
    conditional_overlap_brute_force, conditional_overlap_log2, conditional_overlap_prob_exact,
    first_moment_exact, first_moment_with_bounds, induced_distribution_check,
    second_moment_decomposition_check, CheckStatus, FirstMoment, InducedDistributionReport,
    SecondMomentReport,
};
pub use search::{
    count_d_optimal, distance_spectrum, distance_threshold, encode_codeword, ml_encode,
    ml_encode_compound, EncodingResult, SourceOrigin, SourceSequence, COUNT_BUDGET, SEARCH_BUDGET,
};
