//! Desk-scale laboratory for crystalline order in one and two dimensions.
//!
//! The crate pairs a classical canonical Monte Carlo engine with an exact
//! diagonalization verifier so that the Bogoliubov-inequality argument for
//! the absence of crystalline order can be checked term by term, for local
//! pair potentials `Φ(r_i − r_j)` and for general two-argument (nonlocal)
//! potentials `Φ(r_i, r_j)`.
//!
//! Module map:
//!
//! - [`geometry`]: Bravais cell, periodic box, reciprocal lattice, allowed wavevectors.
//! - [`potentials`]: builtin pair potentials with analytic derivative bundles.
//! - [`montecarlo`]: Metropolis sampling of `e^{−βU}` and blocking error bars.
//! - [`observables`]: Fourier density, order parameter, structure factor,
//!   crystallinity flag and the classical assembly of the inequality.
//! - [`quantum`]: dense operators on a periodic grid, thermal states,
//!   the Bogoliubov inequality and its commutator identities.
//! - [`bounds`]: upper bounds on the double commutator, small-k scaling and
//!   the dimension-dependent divergence probe.
//! - [`schrodinger`]: two-particle relative-coordinate solver with local and
//!   nonlocal kernels.
//! - [`config`], [`report`], [`cli`]: batch front end.
//!
//! Units are `ħ = m = k_B = 1` throughout.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod observables;
pub mod potentials;
pub mod quantum;
pub mod report;
pub mod schrodinger;
pub mod stats;

pub use error::{Error, Result};
