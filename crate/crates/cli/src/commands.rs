use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use platoon_core::decomposition::{run, CostMode, DecompositionConfig, IterationLog, Scheduler};
use platoon_core::evaluate::{
    check, decode_cpf, decode_tsf, indicators, total_cost, PlatoonSolution,
};
use platoon_core::formulations::{build_cpf, build_tsf};
use platoon_core::instance::{
    generate_fleet, load_instance, write_instance, FleetParams, Instance, OdMode, QLimit,
};
use platoon_core::network::{build_time_space, generate_grid, load_network, RoadNetwork, TimeGridMode};
use platoon_core::{Rational64, Scalar};
use platoon_mip::{solve, MipConfig, MipStatus};

use crate::bench;
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "platoon", version, about = "Plan truck routes and schedules that form platoons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance on a grid or a given network.
    Gen(GenArgs),
    /// Solve an instance with an exact model or a heuristic.
    Solve(SolveArgs),
    /// Validate a solution file against an instance.
    Check(CheckArgs),
    /// Run every row of a manifest and write one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cpf,
    Tsf,
    Iheur,
    Lliter,
    Pairwise,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    /// Grid size as ROWSxCOLS.
    #[arg(long, conflicts_with = "network")]
    pub grid: Option<String>,
    /// Network file instead of a grid.
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long)]
    pub vehicles: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Platoon size limit, or `inf`.
    #[arg(long, default_value = "5")]
    pub q: String,
    /// Minutes per time unit.
    #[arg(long, default_value_t = 10.0)]
    pub tu: f64,
    #[arg(long, default_value_t = 24.0)]
    pub horizon_hours: f64,
    /// Allowed driving time as a multiple of the shortest travel time.
    #[arg(long, default_value_t = 1.2)]
    pub window_factor: f64,
    /// Comma separated hub nodes; most trips then start and end near a hub.
    #[arg(long, value_delimiter = ',')]
    pub hubs: Vec<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Wall clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    /// Share of the fleet that may be paired by the pairwise method.
    #[arg(long, default_value_t = 0.2)]
    pub gamma: f64,
    /// Use exact rational arithmetic for costs.
    #[arg(long)]
    pub exact: bool,
    /// Where to write the result JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the solution JSON.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Where to write the heuristic iteration log as JSON lines.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct CheckArgs {
    pub instance: PathBuf,
    pub solution: PathBuf,
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// CSV with columns instance,method,time_limit_s.
    pub manifest: PathBuf,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Rows run at the same time.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = 0.2)]
    pub gamma: f64,
}

pub fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a).map(|_| ExitCode::SUCCESS),
        Command::Solve(a) => cmd_solve(&a).map(|_| ExitCode::SUCCESS),
        Command::Check(a) => cmd_check(&a),
        Command::Bench(a) => bench::cmd_bench(&a).map(|_| ExitCode::SUCCESS),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn parse_q(text: &str) -> Result<QLimit> {
    if text.eq_ignore_ascii_case("inf") {
        return Ok(QLimit::Unlimited);
    }
    match text.parse::<usize>() {
        Ok(q) if q >= 2 => Ok(QLimit::Limited(q)),
        _ => Err(CliError::Usage(format!("--q must be an integer >= 2 or `inf`, got `{text}`"))),
    }
}

fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Usage(format!("--grid must look like 10x10, got `{text}`"));
    let (r, c) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let (r, c): (usize, usize) = (r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?);
    if r < 2 || c < 2 {
        return Err(CliError::Usage("grid needs at least 2 rows and 2 columns".into()));
    }
    Ok((r, c))
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    if a.vehicles == 0 {
        return Err(CliError::Usage("--vehicles must be positive".into()));
    }
    if !(0.0..1.0).contains(&a.eta) {
        return Err(CliError::Usage(format!("--eta must be in [0, 1), got {}", a.eta)));
    }
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !positive(a.tu) || !positive(a.horizon_hours) || !(a.window_factor.is_finite() && a.window_factor >= 1.0) {
        return Err(CliError::Usage("--tu and --horizon-hours must be positive, --window-factor at least 1".into()));
    }
    let q = parse_q(&a.q)?;
    let net: RoadNetwork<f64> = match (&a.grid, &a.network) {
        (Some(g), None) => {
            let (r, c) = parse_grid(g)?;
            generate_grid(r, c, a.seed)
        }
        (None, Some(p)) => load_network(p)?,
        (None, None) => generate_grid(10, 10, a.seed),
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    let horizon = (a.horizon_hours * 60.0 / a.tu).floor() as i64;
    let params = FleetParams { eta: a.eta, q, time_unit: a.tu, horizon, window_factor: a.window_factor };
    let mode = if a.hubs.is_empty() { OdMode::Uniform } else { OdMode::hubs(a.hubs.clone(), a.tu) };
    log::info!(
        "gen: nodes={} arcs={} vehicles={} seed={} eta={} q={q} tu={} horizon={horizon} window_factor={} od={mode:?}",
        net.num_nodes(),
        net.num_arcs(),
        a.vehicles,
        a.seed,
        a.eta,
        a.tu,
        a.window_factor
    );
    let inst = generate_fleet(&net, a.vehicles, a.seed, &mode, &params)?;
    write_out(a.out.as_deref(), &write_instance(&inst))
}

/// Settings a run actually used, echoed in logs and results.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    pub method: Method,
    pub time_limit_s: f64,
    pub gamma: f64,
    pub exact: bool,
    pub nodes: usize,
    pub vehicles: usize,
    pub eta: f64,
    pub q: String,
    pub tu: f64,
    pub horizon: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub config: EffectiveConfig,
    pub status: String,
    pub objective: f64,
    pub bound: f64,
    pub relative_gap: f64,
    pub saving: f64,
    pub ub_saving: f64,
    pub wall_s: f64,
    pub iterations: usize,
    #[serde(skip)]
    pub solution: PlatoonSolution,
    #[serde(skip)]
    pub log: IterationLog,
}

pub fn solve_instance<S: Scalar>(
    name: &str,
    inst: &Instance<S>,
    method: Method,
    time_limit: Duration,
    gamma: f64,
    exact: bool,
) -> Result<SolveReport> {
    let config = EffectiveConfig {
        method,
        time_limit_s: time_limit.as_secs_f64(),
        gamma,
        exact,
        nodes: inst.network.num_nodes(),
        vehicles: inst.num_vehicles(),
        eta: inst.eta.to_f64(),
        q: inst.q.to_string(),
        tu: inst.time_unit,
        horizon: inst.horizon,
    };
    log::info!("solve {name}: {}", serde_json::to_string(&config)?);
    let start = Instant::now();
    let mip = MipConfig { time_limit: Some(time_limit), ..MipConfig::default() };
    let (solution, status, bound, log) = match method {
        Method::Cpf | Method::Tsf => {
            let (res, sol) = if method == Method::Cpf {
                let m = build_cpf(inst)?;
                let res = solve(&m.model, &mip)?;
                let sol = res.status.has_solution().then(|| decode_cpf(inst, &m, &res)).transpose()?;
                (res, sol)
            } else {
                let m = build_tsf(inst, build_time_space(inst, TimeGridMode::EventClosure)?)?;
                let res = solve(&m.model, &mip)?;
                let sol = res.status.has_solution().then(|| decode_tsf(inst, &m, &res)).transpose()?;
                (res, sol)
            };
            let Some(sol) = sol else {
                return Err(CliError::Infeasible(match res.status {
                    MipStatus::Infeasible => "model is infeasible".into(),
                    _ => format!("no feasible solution within {:.1}s", time_limit.as_secs_f64()),
                }));
            };
            let status = if res.status == MipStatus::Optimal { "optimal" } else { "time_limit" };
            (sol, status.to_string(), res.best_bound, IterationLog::default())
        }
        Method::Iheur | Method::Lliter | Method::Pairwise => {
            let cfg = DecompositionConfig {
                mode: if method == Method::Lliter { CostMode::Llcmp } else { CostMode::Icmp },
                scheduler: if method == Method::Pairwise { Scheduler::Pairwise { gamma } } else { Scheduler::Exact },
                time_limit,
                ..DecompositionConfig::default()
            };
            let out = run(inst, &cfg)?;
            let status = if out.elapsed >= time_limit { "time_limit" } else { "converged" };
            (out.solution, status.to_string(), out.lower_bound, out.log)
        }
    };
    let cost = total_cost(inst, &solution)?;
    let ind = indicators(inst, cost, S::from_f64(bound), None)?;
    let report = SolveReport {
        instance: name.to_string(),
        config,
        status,
        objective: cost.to_f64(),
        bound,
        relative_gap: ind.relative_gap,
        saving: ind.saving,
        ub_saving: ind.ub_saving,
        wall_s: start.elapsed().as_secs_f64(),
        iterations: log.records.len(),
        solution,
        log,
    };
    log::info!(
        "{name} {method}: objective {:.6} bound {:.6} saving {:.4}% in {:.2}s",
        report.objective,
        report.bound,
        100.0 * report.saving,
        report.wall_s
    );
    Ok(report)
}

fn time_limit(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs).map_err(|_| CliError::Usage(format!("invalid time limit {secs}")))
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn solve_with<S: Scalar>(a: &SolveArgs) -> Result<()> {
    if !(a.gamma > 0.0 && a.gamma <= 1.0) {
        return Err(CliError::Usage(format!("--gamma must be in (0, 1], got {}", a.gamma)));
    }
    let inst: Instance<S> = load_instance(&a.instance)?;
    let report = solve_instance(&instance_name(&a.instance), &inst, a.method, time_limit(a.time_limit)?, a.gamma, a.exact)?;
    if let Some(p) = &a.solution {
        std::fs::write(p, report.solution.to_json())?;
    }
    if let Some(p) = &a.log {
        report.log.write_json_lines(std::fs::File::create(p)?)?;
    }
    write_out(a.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&report)?))
}

pub fn cmd_solve(a: &SolveArgs) -> Result<()> {
    if a.exact {
        solve_with::<Rational64>(a)
    } else {
        solve_with::<f64>(a)
    }
}

fn check_with<S: Scalar>(a: &CheckArgs) -> Result<ExitCode> {
    let inst: Instance<S> = load_instance(&a.instance)?;
    let sol = PlatoonSolution::from_json(&std::fs::read_to_string(&a.solution)?)?;
    let report = check(&inst, &sol);
    if report.is_ok() {
        println!("ok: cost {}", total_cost(&inst, &sol)?.to_text());
        Ok(ExitCode::SUCCESS)
    } else {
        print!("{report}");
        Ok(ExitCode::from(1))
    }
}

pub fn cmd_check(a: &CheckArgs) -> Result<ExitCode> {
    if a.exact {
        check_with::<Rational64>(a)
    } else {
        check_with::<f64>(a)
    }
}
