use thiserror::Error;

use crate::observables::ScatteringResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Classical momentum undefined: E <= V(x).
    #[error("turning point: E = {energy:.6e} <= V({x:.4}) = {potential:.6e}")]
    TurningPoint { x: f64, energy: f64, potential: f64 },

    /// No open product channel: E <= V(+inf).
    #[error("energy {energy:.6e} is not above the product asymptote {threshold:.6e}")]
    EnergyBelowThreshold { energy: f64, threshold: f64 },

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("no open channel at E = {energy:.6e} (V(+inf) = {asymptote:.6e})")]
    NoOpenChannel { energy: f64, asymptote: f64 },

    #[error("fixed-grid field diverged at t = {t}: max |psi| = {norm:.3e}")]
    CflInstability { t: f64, norm: f64 },

    /// Trajectory field blew up (classical scheme near the barrier top).
    #[error("trajectory field diverged at t = {t}: max |psi| = {norm:.3e}")]
    Divergence { t: f64, norm: f64 },

    #[error("not converged by t_max = {t_max}")]
    NotConverged {
        t_max: f64,
        partial: Box<ScatteringResult>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("incompatible scheme: {message}")]
    IncompatibleScheme { message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
