//! Energy sweeps, N scans and the files they write.
//!
//! Runs are independent, so a sweep hands them to rayon when the `parallel`
//! feature is on. Results come back in input order and every file is
//! written from the calling thread.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Scheme, SolverConfig};
use crate::error::{Error, Result};
use crate::observables::{HistoryRow, ProfileRow, Residuals, ScatteringResult};
use crate::oracle::{reference_probabilities, Probabilities};
use crate::units::hartree_to_cm1;

/// How a batch of runs is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool. Without the `parallel` feature this is the same
    /// as [`Execution::Sequential`].
    #[default]
    Parallel,
}

/// One finished (or failed) run with its timing.
#[derive(Debug)]
pub struct Outcome {
    pub config: SolverConfig,
    pub result: Result<ScatteringResult>,
    pub wall_time: f64,
}

impl Outcome {
    /// The converged result, or the partial one carried by `NotConverged`.
    pub fn best_effort(&self) -> Option<&ScatteringResult> {
        match &self.result {
            Ok(r) => Some(r),
            Err(Error::NotConverged { partial, .. }) => Some(partial),
            Err(_) => None,
        }
    }
}

fn timed(config: &SolverConfig) -> Outcome {
    let start = Instant::now();
    let result = crate::solve(config);
    Outcome {
        config: config.clone(),
        result,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

/// Solves every config. A failing run is recorded and the rest carry on.
pub fn sweep(configs: &[SolverConfig], execution: Execution) -> Vec<Outcome> {
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            configs.par_iter().map(timed).collect()
        }
        _ => configs.iter().map(timed).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    NotConverged,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub energy_hartree: f64,
    pub energy_cm1: f64,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub p_refl: Option<f64>,
    pub p_trans: Option<f64>,
    pub oracle: Option<Probabilities>,
    pub error_refl: Option<f64>,
    pub error_trans: Option<f64>,
    pub residuals: Option<Residuals>,
    pub convergence_time: Option<f64>,
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub history_csv: Option<String>,
}

impl SummaryRow {
    /// Converged and within `bound` of the oracle on both probabilities.
    pub fn accepted(&self, bound: f64) -> bool {
        self.status == RunStatus::Converged
            && matches!((self.error_refl, self.error_trans), (Some(a), Some(b)) if a < bound && b < bound)
    }

    pub fn max_error(&self) -> Option<f64> {
        Some(self.error_refl?.max(self.error_trans?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// The config with every default filled in.
    pub config: RunConfig,
    pub runs: Vec<SummaryRow>,
    pub all_accepted: bool,
}

/// Builds a summary row from an outcome; `canonical` drops the wall time.
pub fn summarize(outcome: &Outcome, canonical: bool) -> SummaryRow {
    let energy = outcome.config.energy;
    let oracle = reference_probabilities(&outcome.config.model, energy).ok();
    let status = match &outcome.result {
        Ok(_) => RunStatus::Converged,
        Err(Error::NotConverged { .. }) => RunStatus::NotConverged,
        Err(_) => RunStatus::Failed,
    };
    let message = outcome.result.as_ref().err().map(|e| e.to_string());
    let r = outcome.best_effort();
    let err = |engine: Option<f64>, exact: Option<f64>| Some((engine? - exact?).abs());
    SummaryRow {
        energy_hartree: energy,
        energy_cm1: hartree_to_cm1(energy),
        status,
        message,
        p_refl: r.map(|r| r.p_refl),
        p_trans: r.map(|r| r.p_trans),
        oracle,
        error_refl: err(r.map(|r| r.p_refl), oracle.map(|o| o.reflection)),
        error_trans: err(r.map(|r| r.p_trans), oracle.map(|o| o.transmission)),
        residuals: r.map(|r| r.residuals),
        convergence_time: r.and_then(|r| r.convergence_time),
        steps: r.map(|r| r.steps),
        wall_time: (!canonical).then_some(outcome.wall_time),
        profile_csv: None,
        history_csv: None,
    }
}

pub fn write_profile_csv(path: &Path, rows: &[ProfileRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "x",
        "re_psi_plus",
        "im_psi_plus",
        "re_psi_minus",
        "im_psi_minus",
        "rho_plus",
        "rho_minus",
        "rho_total",
    ])?;
    for r in rows {
        w.write_record(
            [
                r.x,
                r.psi_plus.re,
                r.psi_plus.im,
                r.psi_minus.re,
                r.psi_minus.im,
                r.rho_plus,
                r.rho_minus,
                r.rho_total,
            ]
            .iter()
            .map(|v| format!("{v:.12e}")),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_history_csv(path: &Path, rows: &[HistoryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "P_refl", "P_trans", "residual"])?;
    for r in rows {
        w.write_record([
            format!("{}", r.t),
            format!("{:.12e}", r.p_refl),
            format!("{:.12e}", r.p_trans),
            r.residual.map(|v| format!("{v:.6e}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Solves every energy in the config and writes `summary.json` plus one
/// profile and one history CSV per run into `output_dir`.
pub fn run_experiment(
    config: &RunConfig,
    execution: Execution,
    canonical: bool,
) -> Result<Summary> {
    config.validate()?;
    let dir = PathBuf::from(&config.output_dir);
    fs::create_dir_all(&dir)?;
    let outcomes = sweep(&config.solvers()?, execution);
    let mut runs = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        let mut row = summarize(o, canonical);
        if let Some(r) = o.best_effort() {
            let profile = format!("profile_{i:03}.csv");
            let history = format!("history_{i:03}.csv");
            write_profile_csv(&dir.join(&profile), &r.profile)?;
            write_history_csv(&dir.join(&history), &r.history)?;
            row.profile_csv = Some(profile);
            row.history_csv = Some(history);
        }
        runs.push(row);
    }
    let summary = Summary {
        config: config.clone(),
        all_accepted: runs.iter().all(|r| r.accepted(config.oracle_bound)),
        runs,
    };
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scheme: Scheme,
    pub n: usize,
    pub dt: f64,
    pub status: RunStatus,
    pub steps: Option<usize>,
    pub convergence_time: Option<f64>,
    pub max_error: Option<f64>,
    pub wall_time: f64,
}

/// Runs the first configured energy for every scheme and N listed under
/// `bench`, one at a time so the timings do not compete for cores.
pub fn bench_scan(config: &RunConfig) -> Result<Vec<BenchRow>> {
    let energy = *config
        .energies
        .hartree()
        .first()
        .ok_or_else(|| Error::Config("energies: at least one energy is required".into()))?;
    let bench = config.bench.clone().unwrap_or_default();
    let mut rows = Vec::new();
    for &scheme in &bench.schemes {
        for &n in &bench.n_values {
            let mut c = config.clone();
            c.scheme = scheme;
            c.n = n;
            c.dt = bench.dt.get(&scheme).copied().unwrap_or(config.dt);
            let solver = c.solver(energy)?;
            let o = timed(&solver);
            let row = summarize(&o, false);
            log::info!(
                "{scheme} N={n}: {:?} error {:?} in {:.3}s",
                row.status,
                row.max_error(),
                o.wall_time
            );
            rows.push(BenchRow {
                scheme,
                n,
                dt: solver.dt,
                max_error: row.max_error(),
                status: row.status,
                steps: row.steps,
                convergence_time: row.convergence_time,
                wall_time: o.wall_time,
            });
        }
    }
    Ok(rows)
}

/// Writes the CPU-vs-N and error-vs-N tables.
pub fn write_bench_tables(dir: &Path, rows: &[BenchRow]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut cpu = csv::Writer::from_path(dir.join("bench_cpu.csv"))?;
    let mut err = csv::Writer::from_path(dir.join("bench_error.csv"))?;
    cpu.write_record(["scheme", "n", "dt", "steps", "wall_time"])?;
    err.write_record(["scheme", "n", "dt", "status", "max_error"])?;
    for r in rows {
        let steps = r.steps.map(|s| s.to_string()).unwrap_or_default();
        cpu.write_record([
            r.scheme.name(),
            &r.n.to_string(),
            &r.dt.to_string(),
            &steps,
            &format!("{:.6}", r.wall_time),
        ])?;
        let status = serde_json::to_value(&r.status)?;
        let e = r.max_error.map(|e| format!("{e:.6e}")).unwrap_or_default();
        err.write_record([
            r.scheme.name(),
            &r.n.to_string(),
            &r.dt.to_string(),
            status.as_str().unwrap_or(""),
            &e,
        ])?;
    }
    cpu.flush()?;
    err.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub energy_cm1: f64,
    pub converged: Option<Residuals>,
    /// The state stopped at 1% of `t_max`.
    pub early: Option<Residuals>,
}

/// Stationarity residuals of the converged state and of the state stopped
/// at 1% of `t_max`, per energy.
pub fn residual_report(config: &RunConfig, execution: Execution) -> Result<Vec<ResidualReport>> {
    let full = config.solvers()?;
    let early: Vec<SolverConfig> = full
        .iter()
        .map(|c| {
            let mut c = c.clone().with_t_max(0.01 * c.t_max);
            c.stop_at_convergence = false;
            c
        })
        .collect();
    let a = sweep(&full, execution);
    let b = sweep(&early, execution);
    Ok(a.iter()
        .zip(&b)
        .map(|(a, b)| ResidualReport {
            energy_cm1: hartree_to_cm1(a.config.energy),
            converged: a.result.as_ref().ok().map(|r| r.residuals),
            early: b.best_effort().map(|r| r.residuals),
        })
        .collect())
}

pub fn write_residual_report(path: &Path, rows: &[ResidualReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "energy_cm1",
        "phase_converged",
        "schrodinger_converged",
        "phase_early",
        "schrodinger_early",
    ])?;
    let f = |v: Option<f64>| v.map(|v| format!("{v:.6e}")).unwrap_or_default();
    for r in rows {
        w.write_record([
            format!("{}", r.energy_cm1),
            f(r.converged.map(|x| x.phase)),
            f(r.converged.map(|x| x.schrodinger)),
            f(r.early.map(|x| x.phase)),
            f(r.early.map(|x| x.schrodinger)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn free_config(dir: &Path) -> RunConfig {
        let text = format!(
            r#"{{"scheme": "const_vel_traj", "potential": {{"kind": "free"}},
                "energies": {{"unit": "cm-1", "values": [300, 500]}},
                "t_max": 10000, "output_dir": {:?}}}"#,
            dir.display().to_string()
        );
        parse_config(&text).unwrap()
    }

    #[test]
    fn free_sweep_writes_all_files() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = free_config(tmp.path());
        let s = run_experiment(&cfg, Execution::Parallel, true).unwrap();
        assert!(s.all_accepted);
        assert_eq!(s.runs.len(), 2);
        for r in &s.runs {
            assert!((r.p_trans.unwrap() - 1.0).abs() < 1e-8);
            assert!(r.wall_time.is_none());
            assert!(tmp.path().join(r.profile_csv.as_ref().unwrap()).exists());
        }
        let hist = fs::read_to_string(tmp.path().join("history_000.csv")).unwrap();
        assert!(hist.starts_with("t,P_refl,P_trans,residual\n"));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = free_config(tmp.path());
        let solvers = cfg.solvers().unwrap();
        let a = sweep(&solvers, Execution::Sequential);
        let b = sweep(&solvers, Execution::Parallel);
        for (a, b) in a.iter().zip(&b) {
            let (a, b) = (a.result.as_ref().unwrap(), b.result.as_ref().unwrap());
            assert_eq!(a.p_refl, b.p_refl);
            assert_eq!(a.p_trans, b.p_trans);
        }
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = free_config(tmp.path());
        cfg.t_max = 100.0;
        let s = run_experiment(&cfg, Execution::Sequential, true).unwrap();
        assert!(!s.all_accepted);
        assert!(s.runs.iter().all(|r| r.status == RunStatus::NotConverged));
    }
}
