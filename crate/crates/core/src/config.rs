//! Run configuration: the JSON document read by the CLI and the resolved
//! per-energy solver settings handed to the engines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{PotentialKind, PotentialModel};
use crate::units::{Energy, EnergyUnit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Trajectories at the local classical velocity.
    ClassicalTraj,
    /// Trajectories at the fixed incident velocity.
    ConstVelTraj,
    /// Eulerian constant-velocity equations on a fixed grid.
    ConstVelFixed,
    /// Constant-velocity trajectories with separate reactant and product
    /// momenta either side of a dividing point.
    ConstVelTwoRegion,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::ClassicalTraj => "classical_traj",
            Scheme::ConstVelTraj => "const_vel_traj",
            Scheme::ConstVelFixed => "const_vel_fixed",
            Scheme::ConstVelTwoRegion => "const_vel_two_region",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown scheme `{s}`")))
    }
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_WINDOW: f64 = 500.0;
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 100;
/// Margin above the barrier maximum required by the classical scheme.
pub const CLASSICAL_MARGIN: f64 = 1e-6;

/// Settings for one engine run at one energy, all in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub model: PotentialModel,
    pub energy: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub x_divider: Option<f64>,
    pub n: usize,
    pub dt: f64,
    pub t_max: f64,
    pub tol: f64,
    /// Length of time over which P must stay within `tol`.
    pub window: f64,
    /// Steps between stationarity-residual evaluations in the history; 0 disables.
    pub snapshot_stride: usize,
    pub stop_at_convergence: bool,
}

impl SolverConfig {
    /// Standard settings on `[-3, 3]` with `N = 31`, `dt = 10`, `t_max = 1e4`.
    pub fn new(scheme: Scheme, model: PotentialModel, energy: f64) -> Self {
        Self {
            scheme,
            model,
            energy,
            x_left: -3.0,
            x_right: 3.0,
            x_divider: matches!(scheme, Scheme::ConstVelTwoRegion).then_some(0.0),
            n: 31,
            dt: 10.0,
            t_max: 1e4,
            tol: DEFAULT_TOL,
            window: DEFAULT_WINDOW,
            snapshot_stride: DEFAULT_SNAPSHOT_STRIDE,
            stop_at_convergence: true,
        }
    }

    pub fn with_grid(mut self, n: usize, dt: f64) -> Self {
        self.n = n;
        self.dt = dt;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn spacing(&self) -> f64 {
        (self.x_right - self.x_left) / (self.n - 1) as f64
    }

    pub fn mass(&self) -> f64 {
        self.model.mass
    }

    /// Asymptotic momenta `(p_L, p_R)`.
    pub fn asymptotic_momenta(&self) -> Result<(f64, f64)> {
        let (vl, vr) = self.model.asymptotes();
        let m = self.mass();
        let pl =
            crate::potentials::momentum_from(m, self.energy, vl).ok_or(Error::NoOpenChannel {
                energy: self.energy,
                asymptote: vl,
            })?;
        let pr = crate::potentials::momentum_from(m, self.energy, vr).ok_or(
            Error::EnergyBelowThreshold {
                energy: self.energy,
                threshold: vr,
            },
        )?;
        Ok((pl, pr))
    }

    /// Time a sample needs to cross `[x_L, x_R]`. Neither edge can feel the
    /// barrier before this, so convergence is not declared earlier.
    pub fn transit_time(&self) -> Result<f64> {
        let (pl, pr) = self.asymptotic_momenta()?;
        let m = self.mass();
        let len = self.x_right - self.x_left;
        Ok(match (self.scheme, self.x_divider) {
            (Scheme::ClassicalTraj, _) => {
                let n = 2000;
                let h = len / n as f64;
                let mut f = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let x = self.x_left + h * i as f64;
                    let p = self.model.classical_momentum(x, self.energy)?;
                    f.push(m / p);
                }
                crate::observables::integrate_uniform(&f, h)
            }
            (Scheme::ConstVelTwoRegion, Some(x0)) => {
                m * ((x0 - self.x_left) / pl + (self.x_right - x0) / pr)
            }
            _ => m * len / pl,
        })
    }

    /// Structural checks plus scheme/potential compatibility.
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if !(self.x_left < self.x_right) {
            return cfg(format!(
                "x_left ({}) must be below x_right ({})",
                self.x_left, self.x_right
            ));
        }
        if self.n < 5 {
            return cfg(format!("n must be at least 5, got {}", self.n));
        }
        if !(self.dt > 0.0) {
            return cfg(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_max > self.dt) {
            return cfg(format!(
                "t_max ({}) must exceed dt ({})",
                self.t_max, self.dt
            ));
        }
        if !(self.tol > 0.0) || !(self.window > 0.0) {
            return cfg("tol and window must be positive".into());
        }
        if !(self.energy > 0.0) || !self.energy.is_finite() {
            return cfg(format!("energy must be positive, got {}", self.energy));
        }
        let incompatible = |message: String| Err(Error::IncompatibleScheme { message });
        match self.scheme {
            Scheme::ConstVelTwoRegion => {
                let Some(x0) = self.x_divider else {
                    return cfg("const_vel_two_region needs x_divider".into());
                };
                if !(self.x_left < x0 && x0 < self.x_right) {
                    return cfg(format!(
                        "x_divider {x0} must lie strictly inside (x_left, x_right)"
                    ));
                }
                let h = self.spacing();
                if (x0 - self.x_left) < 2.0 * h || (self.x_right - x0) < 2.0 * h {
                    return cfg("each region needs at least three grid nodes".into());
                }
                let (_, vr) = self.model.asymptotes();
                if self.energy <= vr {
                    return Err(Error::EnergyBelowThreshold {
                        energy: self.energy,
                        threshold: vr,
                    });
                }
            }
            _ => {
                if !self.model.is_asymptotically_symmetric() {
                    return incompatible(format!(
                        "{} needs equal asymptotes; this potential is asymmetric, use const_vel_two_region",
                        self.scheme
                    ));
                }
            }
        }
        if self.scheme == Scheme::ClassicalTraj {
            if !self.model.is_smooth() {
                return incompatible("classical_traj needs a smooth potential".into());
            }
            let vmax = self.model.max_on(self.x_left, self.x_right);
            if self.energy < vmax + CLASSICAL_MARGIN {
                return incompatible(format!(
                    "classical_traj needs E above the barrier maximum: E = {:.6e}, max V = {:.6e}",
                    self.energy, vmax
                ));
            }
        }
        Ok(())
    }
}

/// Potential block of the config file, energies with explicit units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    Eckart {
        v0: Energy,
        alpha: f64,
    },
    SquareBarrier {
        v0: Energy,
        x1: f64,
        x2: f64,
    },
    UphillRamp {
        v0: Energy,
        alpha: f64,
    },
    DoubleGaussian {
        v0: Energy,
        beta: f64,
        center: f64,
    },
    CustomPiecewise {
        edges: Vec<f64>,
        values: EnergyValues,
    },
    Free,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyValues {
    pub values: Vec<f64>,
    pub unit: EnergyUnit,
}

impl PotentialSpec {
    pub fn build(&self, mass: f64) -> Result<PotentialModel> {
        let kind = match self {
            PotentialSpec::Eckart { v0, alpha } => PotentialKind::Eckart {
                v0: v0.to_hartree(),
                alpha: *alpha,
            },
            PotentialSpec::SquareBarrier { v0, x1, x2 } => PotentialKind::SquareBarrier {
                v0: v0.to_hartree(),
                x1: *x1,
                x2: *x2,
            },
            PotentialSpec::UphillRamp { v0, alpha } => PotentialKind::UphillRamp {
                v0: v0.to_hartree(),
                alpha: *alpha,
            },
            PotentialSpec::DoubleGaussian { v0, beta, center } => PotentialKind::DoubleGaussian {
                v0: v0.to_hartree(),
                beta: *beta,
                center: *center,
            },
            PotentialSpec::CustomPiecewise { edges, values } => PotentialKind::CustomPiecewise {
                edges: edges.clone(),
                values: values
                    .values
                    .iter()
                    .map(|&v| values.unit.to_hartree(v))
                    .collect(),
            },
            PotentialSpec::Free => return PotentialModel::free(mass),
        };
        PotentialModel::new(kind, mass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnergyGrid {
    List { values: Vec<f64> },
    Linspace { start: f64, stop: f64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySpec {
    pub unit: EnergyUnit,
    #[serde(flatten)]
    pub grid: EnergyGrid,
}

impl EnergySpec {
    /// Energies in the config's unit.
    pub fn values(&self) -> Vec<f64> {
        match &self.grid {
            EnergyGrid::List { values } => values.clone(),
            EnergyGrid::Linspace { start, stop, count } => match count {
                0 => vec![],
                1 => vec![*start],
                c => (0..*c)
                    .map(|i| start + (stop - start) * i as f64 / (c - 1) as f64)
                    .collect(),
            },
        }
    }

    pub fn hartree(&self) -> Vec<f64> {
        self.values()
            .into_iter()
            .map(|v| self.unit.to_hartree(v))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default = "default_bench_n")]
    pub n_values: Vec<usize>,
    #[serde(default = "default_bench_schemes")]
    pub schemes: Vec<Scheme>,
    /// Time steps per scheme; schemes not listed use the run's dt.
    #[serde(default)]
    pub dt: std::collections::BTreeMap<Scheme, f64>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        Self {
            n_values: default_bench_n(),
            schemes: default_bench_schemes(),
            dt: Default::default(),
        }
    }
}

fn default_bench_n() -> Vec<usize> {
    (1..=10).map(|i| 1 + 10 * i).collect()
}

fn default_bench_schemes() -> Vec<Scheme> {
    vec![Scheme::ConstVelTraj, Scheme::ConstVelFixed]
}

fn default_mass() -> f64 {
    2000.0
}
fn default_x_left() -> f64 {
    -3.0
}
fn default_x_right() -> f64 {
    3.0
}
fn default_n() -> usize {
    31
}
fn default_dt() -> f64 {
    10.0
}
fn default_t_max() -> f64 {
    1e4
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_window() -> f64 {
    DEFAULT_WINDOW
}
fn default_stride() -> usize {
    DEFAULT_SNAPSHOT_STRIDE
}
fn default_bound() -> f64 {
    1e-4
}
fn default_output() -> String {
    "cpwm-out".into()
}

/// The config document. Every default is filled in on parse, so
/// serialising a parsed config records the full settings used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub potential: PotentialSpec,
    #[serde(default = "default_mass")]
    pub mass: f64,
    pub energies: EnergySpec,
    #[serde(default = "default_x_left")]
    pub x_left: f64,
    #[serde(default = "default_x_right")]
    pub x_right: f64,
    #[serde(default)]
    pub x_divider: Option<f64>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default = "default_output")]
    pub output_dir: String,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    /// Largest accepted |engine - oracle| for the exit status.
    #[serde(default = "default_bound")]
    pub oracle_bound: f64,
    #[serde(default)]
    pub bench: Option<BenchSpec>,
}

impl RunConfig {
    pub fn model(&self) -> Result<PotentialModel> {
        self.potential.build(self.mass)
    }

    /// Solver settings for one energy (hartree).
    pub fn solver(&self, energy: f64) -> Result<SolverConfig> {
        let x_divider = match (self.scheme, self.x_divider) {
            (Scheme::ConstVelTwoRegion, None) => Some(0.0),
            (_, d) => d,
        };
        Ok(SolverConfig {
            scheme: self.scheme,
            model: self.model()?,
            energy,
            x_left: self.x_left,
            x_right: self.x_right,
            x_divider,
            n: self.n,
            dt: self.dt,
            t_max: self.t_max,
            tol: self.tol,
            window: self.window,
            snapshot_stride: self.snapshot_stride,
            stop_at_convergence: true,
        })
    }

    pub fn solvers(&self) -> Result<Vec<SolverConfig>> {
        self.energies
            .hartree()
            .into_iter()
            .map(|e| self.solver(e))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.energies.values().is_empty() {
            return Err(Error::Config(
                "energies: at least one energy is required".into(),
            ));
        }
        if !(self.oracle_bound > 0.0) {
            return Err(Error::Config("oracle_bound must be positive".into()));
        }
        for s in self.solvers()? {
            s.validate()?;
        }
        Ok(())
    }
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("{e}")))?;
    cfg.validate()?;
    Ok(cfg)
}
