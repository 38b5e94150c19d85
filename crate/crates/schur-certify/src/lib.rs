//! Ancilla-free certification of unitary quantum processes.
//!
//! Testers decide, from n uses of an unknown unitary U, whether U equals a
//! target V up to a global phase or is ε-far in dist(U,V) = sqrt(1 −
//! |tr(U†V)/d|²). Everything reduces to characters of unitary-group irreps
//! evaluated at the spectrum of U†V, so acceptance probabilities are exact
//! and no 2ⁿ-dimensional state is ever built.
//!
//! Modules
//! - [`partitions`]: partition combinatorics, exact Schur-Weyl dimensions.
//! - [`unitary`]: unitary matrices, spectra as phases, Haar sampling, the
//!   certification distance.
//! - [`characters`]: irrep characters from eigenphases, four independent
//!   evaluation routes.
//! - [`certification`]: tester planners, exact acceptance probabilities,
//!   soundness bounds.
//! - [`monte_carlo`]: Bernoulli-trial simulation and parameter sweeps.
//! - [`tomography`]: the tomography risk bound, its integrals, and the
//!   query planner.
//!
//! Numeric core is generic over the scalar type ([`Scalar`]); `f64` is the
//! default and what the CLI uses.

pub mod certification;
pub mod characters;
pub mod error;
pub mod monte_carlo;
pub mod partitions;
pub mod scalar;
pub mod tomography;
pub mod unitary;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use characters::{char_bialternant, char_jacobi_trudi, char_spin, char_ssyt_oracle, char_staircase, CharMethod, CharacterValue};
pub use certification::{
    accept_prob_known, accept_prob_swap, ancilla_requirement, blowup_report, dirichlet_bound_check,
    plan, soundness_bound_qubit, trace_identity_check, AcceptanceReport, AncillaReport,
    BlowupReport, TesterKind, TesterPlan,
};
pub use partitions::{
    dim_bounds, dim_irrep, dim_multiplicity, enumerate_partitions, partition_dims,
    staircase_partition, DimBounds, Partition, PartitionDims,
};
pub use monte_carlo::{run_trials, stream_seed, sweep_distance, SweepRow, SweepTable, TrialStats};
pub use tomography::{
    integral_closed_forms, mc_integral_oracle, plan_queries_tomography, risk_closed_form,
    risk_closed_form_exact, risk_finite_sum, IntegralClosedForms, McEstimate, PartitionGaps,
    RiskProfile, RiskRegime, SimplexIntegrand,
};
pub use unitary::{distance, eigenphases, haar_random, unitary_from_phases, EigenPhases, UnitaryMatrix};


/// Default seed used by the CLI when none is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

// Concrete aliases; the generic types default to f64 already, these cover
// code that wants the width spelled out.
pub type Unitary64 = unitary::UnitaryMatrix<f64>;
pub type Unitary32 = unitary::UnitaryMatrix<f32>;
pub type Phases64 = unitary::EigenPhases<f64>;
pub type Phases32 = unitary::EigenPhases<f32>;
