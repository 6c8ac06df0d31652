//! Exact linear systems toolkit: arithmetic over the rationals and finite
//! fields, polynomial matrices and coprime factorizations, Plücker
//! coordinates on Grassmannians, monomial and osculating interpolation
//! systems, and static output feedback pole placement.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod field;
pub mod grassmann;
pub mod matrix;
pub mod poleplace;
pub mod poly;
pub mod report;
pub mod systems;

pub use constructions::{
    cauchy_monomial_system, find_zero_maximal_minor, mds_check, monomial_matrix,
    osculating_curve_classical, osculating_curve_hasse, superregular_check, DegreeMatrix,
    MonomialSystem,
};
pub use error::{Error, Result};
pub use field::{Field, FieldEmbedding, Scalar};
pub use grassmann::{
    enumerate_grassmannian, gaussian_binomial, is_decomposable, plucker_of_matrix,
    reconstruct_matrix, MultiIndex, PluckerVector,
};
pub use matrix::{left_kernel_min_basis, si_minus_a, stacked_det, ConstMatrix, PolyMatrix};
pub use poleplace::{
    census, fiber_solve_2x2, orbit_decomposition, plucker_axis_swaps, schubert_number,
    verify_f2_nonsurjectivity, CensusMode, CensusReport, F2CanonicalCase, F2Case, F2Report,
    FiberEntry, FiberSolution,
};
pub use poly::{Degree, Poly};
pub use systems::{
    charpoly_via_factors, charpoly_via_state_block, closed_loop_charpoly, coefficient_matrix,
    evaluate_curve_point, is_degenerate_exact, is_degenerate_rational, left_coprime_factorization,
    observability_rank, reachability_rank, recover_feedback, CoefficientMatrix, Compensator,
    Degeneracy, FactoredSystem, ProjectiveCompensator, StateSpace,
};

pub use report::{read_system, system_from_json, system_to_json, SystemInput};

/// Command line entry point; returns the process exit code.
pub fn cli_main() -> i32 {
    cli::run()
}
