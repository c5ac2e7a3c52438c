//! Graph-based rank two-sample tests (RISE).
//!
//! Builds nested similarity-graph sequences over pooled observations,
//! weights their edges by interchangeable ranking schemes, and tests
//! F_X = F_Y through the chi-squared-calibrated statistic T_R with exact
//! permutation moments, permutation p-values, and degeneracy diagnostics.
//! A simulation bench supports size/power studies over four distribution
//! families.

pub mod error;
pub mod geometry;
pub mod graph;
pub mod inference;
pub mod io;
pub mod rank;
pub mod sim;
pub mod stats;

pub use error::{Result, RiseError};
pub use geometry::{
    distance_matrix, validate_distance_matrix, DistanceMatrix, Metric, ObservationSet,
};
pub use graph::{GraphBuilder, GraphKind, GraphSequence};
pub use inference::{
    condition_diagnostics, degeneracy_check, permutation_moments, permutation_pvalue, rank_sums,
    rise_test, Degeneracy, MomentSummary, PermutationMode, PermutationStatistic, SampleSplit,
    TestResult,
};
pub use rank::{symmetrize, KernelSpec, RankKind, RankMatrix, RankScheme, RankSpec};
