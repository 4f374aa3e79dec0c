//! Counter-propagating wave method for 1D stationary scattering.
//!
//! The wavefunction is split into right- and left-moving components that are
//! relaxed to the stationary state either on moving trajectory grids
//! ([`lagrangian`]) or on a fixed grid ([`eulerian`]). Reflection and
//! transmission probabilities are read off the components at the edges of the
//! interaction region and checked against the references in [`oracle`].

// Negated comparisons double as NaN rejection in validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod eulerian;
pub mod experiment;
pub mod kernels;
pub mod lagrangian;
pub mod numerics;
pub mod observables;
pub mod oracle;
pub mod potentials;
pub mod units;

pub use config::{parse_config, RunConfig, Scheme, SolverConfig};
pub use error::{Error, Result};
pub use observables::ScatteringResult;
pub use potentials::{PotentialKind, PotentialModel};

/// Runs whichever engine the scheme calls for.
pub fn solve(config: &SolverConfig) -> Result<ScatteringResult> {
    match config.scheme {
        Scheme::ConstVelFixed => eulerian::run_fixed_to_convergence(config),
        _ => lagrangian::run_to_convergence(config),
    }
}
