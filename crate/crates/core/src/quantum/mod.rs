//! Exact verification of the Bogoliubov inequality and its commutator
//! identities with dense operators on a periodic grid.
//!
//! Positions are diagonal in the grid basis, momenta are diagonal in the
//! discrete Fourier basis. Spectral momentum makes `[p̂, e^{ik·r̂}] = ħk e^{ik·r̂}`
//! exact on states whose Fourier content stays clear of the Nyquist edge, so
//! identity residuals are measured on such band-limited subspaces.
//!
//! `Ĉ` is the vector operator contracted along `k̂`.

mod draws;
mod identities;
mod operators;
mod sector;
mod space;
mod thermal;

pub use draws::{random_draws, random_potential, BogoliubovDraw};
pub use identities::{
    bogoliubov_from, bogoliubov_slack, commutator_residuals, forms_coincide, thermal_identity_gaps,
    BogoliubovReport, IdentityReport, KineticAudit, BANDWIDTH_TOL, IDENTITY_TOL, SLACK_TOL,
};
pub use operators::{
    c_component, c_operator, collective_phase, combine, commutator, commutator_with_diagonal,
    cos_diagonal, density_diagonal, derived_kinetic_coefficients, diagonal, fundamental_operators,
    hamiltonian, hermiticity_defect, kinetic, kinetic_basis, max_entry, momentum, momentum_1d,
    phase_diagonal, potential_diagonal, potential_forms, printed_kinetic_coefficients,
    projected_momentum, real_diagonal, scaled, sin_diagonal, theorem_operators, trace_product,
    FundamentalOperators, OperatorMatrix, PotentialForms, TheoremOperators, HERMITIAN_TOL,
};
pub use sector::PairSectorSolver;
pub use space::{
    band_limited_basis, build_space, dft_matrix, diagonal_bandwidth, embed_mode, spectral_operator,
    ManyBodySpace, Wave, DENSE_BUDGET, HBAR, MASS,
};
pub use thermal::{
    eigh, thermal_average, thermal_average_diagonal, thermal_average_real_diagonal, ThermalState,
};
