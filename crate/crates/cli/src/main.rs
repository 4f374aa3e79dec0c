//! Command-line front end: reads a JSON run config, applies flag overrides
//! and writes summary, profile and history files into the output directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cpwm::config::{EnergyGrid, RunConfig, Scheme};
use cpwm::experiment::{self, Execution, RunStatus};

#[derive(Parser, Debug)]
#[command(
    name = "cpwm",
    version,
    about = "Counter-propagating wave scattering solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve at a single energy (`--energy`, or the first one in the config).
    Solve(Common),
    /// Solve at every energy in the config.
    Sweep(Common),
    /// Time every scheme and N listed under `bench` at the first energy.
    Bench(Common),
    /// Stationarity residuals of converged and early-stopped states.
    ResidualReport(Common),
}

/// Config path plus overrides for the matching config fields.
#[derive(Args, Debug)]
struct Common {
    /// JSON run config.
    config: PathBuf,
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    mass: Option<f64>,
    /// Single energy, in the config's energy unit.
    #[arg(long)]
    energy: Option<f64>,
    #[arg(long)]
    x_left: Option<f64>,
    #[arg(long)]
    x_right: Option<f64>,
    #[arg(long)]
    x_divider: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    window: Option<f64>,
    #[arg(long)]
    output_dir: Option<String>,
    #[arg(long)]
    snapshot_stride: Option<usize>,
    #[arg(long)]
    oracle_bound: Option<f64>,
    /// Leave wall times out of the summary so reruns are byte-identical.
    #[arg(long)]
    canonical: bool,
    /// Run energies one after another instead of on the thread pool.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let text = fs::read_to_string(&self.config)
            .with_context(|| format!("reading {}", self.config.display()))?;
        // Overrides go through the JSON value so the usual parse and
        // validation apply to the merged document.
        let mut doc: serde_json::Value = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", self.config.display()))?;
        let obj = doc
            .as_object_mut()
            .context("config must be a JSON object")?;
        let mut set = |key: &str, v: serde_json::Value| {
            obj.insert(key.to_string(), v);
        };
        if let Some(s) = self.scheme {
            set("scheme", serde_json::to_value(s)?);
        }
        macro_rules! over {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    set(stringify!($f), serde_json::to_value(v)?);
                }
            )*};
        }
        over!(
            mass,
            x_left,
            x_right,
            x_divider,
            n,
            dt,
            t_max,
            tol,
            window,
            output_dir,
            snapshot_stride,
            oracle_bound
        );
        let mut cfg: RunConfig = serde_json::from_value(doc).context("invalid config")?;
        if let Some(e) = self.energy {
            cfg.energies.grid = EnergyGrid::List { values: vec![e] };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

fn run_sweep(args: &Common, single: bool) -> Result<bool> {
    let mut cfg = args.load()?;
    if single {
        let first = *cfg.energies.values().first().context("no energies")?;
        cfg.energies.grid = EnergyGrid::List {
            values: vec![first],
        };
    }
    let summary = experiment::run_experiment(&cfg, args.execution(), args.canonical)?;
    for r in &summary.runs {
        let p = |v: Option<f64>| v.map(|v| format!("{v:.8}")).unwrap_or_else(|| "-".into());
        let e = r
            .max_error()
            .map(|e| format!("{e:.2e}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "E={:>9.3} cm-1  {:<13} P_refl={} P_trans={} error={}",
            r.energy_cm1,
            format!("{:?}", r.status),
            p(r.p_refl),
            p(r.p_trans),
            e
        );
        if let Some(m) = &r.message {
            log::warn!("E={:.3} cm-1: {m}", r.energy_cm1);
        }
    }
    println!(
        "summary: {}",
        Path::new(&cfg.output_dir).join("summary.json").display()
    );
    Ok(summary.all_accepted)
}

fn run_bench(args: &Common) -> Result<bool> {
    let cfg = args.load()?;
    let rows = experiment::bench_scan(&cfg)?;
    let dir = PathBuf::from(&cfg.output_dir);
    experiment::write_bench_tables(&dir, &rows)?;
    for r in &rows {
        println!(
            "{:<22} N={:<4} dt={:<6} steps={:<8} error={:<10} {:.3}s",
            r.scheme.name(),
            r.n,
            r.dt,
            r.steps.map(|s| s.to_string()).unwrap_or_default(),
            r.max_error.map(|e| format!("{e:.2e}")).unwrap_or_default(),
            r.wall_time
        );
    }
    println!("tables: {}", dir.display());
    Ok(rows.iter().all(|r| {
        r.status == RunStatus::Converged && r.max_error.is_some_and(|e| e < cfg.oracle_bound)
    }))
}

fn run_residual_report(args: &Common) -> Result<bool> {
    let cfg = args.load()?;
    let rows = experiment::residual_report(&cfg, args.execution())?;
    let dir = PathBuf::from(&cfg.output_dir);
    fs::create_dir_all(&dir)?;
    let path = dir.join("residual_report.csv");
    experiment::write_residual_report(&path, &rows)?;
    for r in &rows {
        let f = |v: Option<f64>| v.map(|v| format!("{v:.2e}")).unwrap_or_else(|| "-".into());
        println!(
            "E={:>9.3} cm-1  converged phase={} schrodinger={}  early phase={} schrodinger={}",
            r.energy_cm1,
            f(r.converged.map(|x| x.phase)),
            f(r.converged.map(|x| x.schrodinger)),
            f(r.early.map(|x| x.phase)),
            f(r.early.map(|x| x.schrodinger)),
        );
    }
    println!("report: {}", path.display());
    Ok(rows.iter().all(|r| r.converged.is_some()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(a) => run_sweep(a, a.energy.is_none()),
        Command::Sweep(a) => run_sweep(a, false),
        Command::Bench(a) => run_bench(a),
        Command::ResidualReport(a) => run_residual_report(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
