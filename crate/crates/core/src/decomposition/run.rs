use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::time::{Duration, Instant};

use platoon_mip::{solve, MipConfig, MipStatus};
use serde::{Deserialize, Serialize};

use crate::decomposition::{compositions, fingerprint, modify_costs, CostHistory, CostMode};
use crate::error::{Error, Result};
use crate::evaluate::{decode_tif, total_cost, PlatoonSolution};
use crate::formulations::{build_fcnf, build_tif, vehicle_data, CostTable, FixedRoutes, TifVariant};
use crate::instance::Instance;
use crate::pairwise::pairwise_schedule;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheduler {
    /// Scheduling model solved exactly.
    Exact,
    /// Pair matching, window shrinking, relaxed model and repair.
    Pairwise { gamma: f64 },
}

#[derive(Debug, Clone)]
pub struct DecompositionConfig {
    pub mode: CostMode,
    pub time_limit: Duration,
    /// Stop once any routing solution has been produced this many times.
    pub repeat_limit: usize,
    pub scheduler: Scheduler,
    /// Settings for each subproblem solve; the time limit is capped by
    /// what remains of the overall budget.
    pub mip: MipConfig,
    pub max_iterations: Option<usize>,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        DecompositionConfig {
            mode: CostMode::Icmp,
            time_limit: Duration::from_secs(30 * 60),
            repeat_limit: 3,
            scheduler: Scheduler::Exact,
            mip: MipConfig::default(),
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub fingerprint: u64,
    /// Routing objective under this iteration's costs.
    pub routing_objective: f64,
    pub routing_status: String,
    pub scheduling_savings: f64,
    /// Cost of the decoded plan.
    pub cost: f64,
    pub best_cost: f64,
    /// `(tail, head, members)` for every platoon of two or more vehicles.
    pub platoons: Vec<(usize, usize, Vec<usize>)>,
    pub fallbacks: usize,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub records: Vec<IterationRecord>,
}

impl IterationLog {
    pub fn write_json_lines(&self, mut out: impl Write) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_json_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionOutcome<S> {
    pub solution: PlatoonSolution,
    pub cost: S,
    /// Best bound of the first routing solve, which uses the true costs and
    /// so bounds the optimum from below.
    pub lower_bound: f64,
    pub log: IterationLog,
    /// Cost tables, scenarios and compositions of every iteration.
    pub history: CostHistory<S>,
    pub elapsed: Duration,
}

fn remaining(start: Instant, limit: Duration) -> Duration {
    limit.saturating_sub(start.elapsed())
}

/// Alternates routing and scheduling, updating per-vehicle arc costs from
/// each schedule, until a routing solution repeats `repeat_limit` times or
/// the time limit passes. Returns the cheapest plan found.
pub fn run<S: Scalar>(inst: &Instance<S>, cfg: &DecompositionConfig) -> Result<DecompositionOutcome<S>> {
    let start = Instant::now();
    let net = &inst.network;
    let (whole, adm) = vehicle_data(inst)?;
    let mut costs = CostTable::base(inst, &adm);
    let mut history = CostHistory::default();
    history.tables.insert(1, costs.clone());
    history.scenarios.insert(1, HashMap::new());
    let mut seen: HashMap<u64, usize> = HashMap::new();
    // Schedules are deterministic given the routes, so repeats reuse them.
    let mut schedules: HashMap<u64, (PlatoonSolution, f64)> = HashMap::new();
    let mut previous: Vec<Vec<usize>> = adm.iter().map(|a| a.best_path.clone()).collect();
    let mut best: Option<(PlatoonSolution, S)> = None;
    let mut lower_bound = f64::NEG_INFINITY;
    let mut log = IterationLog::default();

    for n in 1.. {
        let fcnf = build_fcnf(inst, &adm, &costs)?;
        let mip = MipConfig {
            time_limit: Some(cfg.mip.time_limit.map_or(remaining(start, cfg.time_limit), |t| t.min(remaining(start, cfg.time_limit)))),
            initial_solution: Some(fcnf.hint(&previous)),
            ..cfg.mip.clone()
        };
        let res = solve(&fcnf.model, &mip)?;
        if !res.status.has_solution() {
            return Err(Error::NoFeasibleSolution);
        }
        if n == 1 {
            lower_bound = res.best_bound;
        }
        let paths = fcnf.routes(inst, &res.values)?;
        let keyed: BTreeMap<usize, Vec<(usize, usize)>> = paths
            .iter()
            .enumerate()
            .map(|(v, p)| (v, p.iter().map(|&k| (net.arc(k).tail, net.arc(k).head)).collect()))
            .collect();
        let fp = fingerprint(&keyed);
        let count = {
            let c = seen.entry(fp).or_default();
            *c += 1;
            *c
        };
        let routes = FixedRoutes::new(inst, paths.clone())?;
        let (solution, savings) = match schedules.get(&fp) {
            Some(cached) => cached.clone(),
            None => {
                let limit = cfg.mip.time_limit.map_or(remaining(start, cfg.time_limit), |t| t.min(remaining(start, cfg.time_limit)));
                let scheduled = schedule(inst, &routes, cfg, limit)?;
                schedules.insert(fp, scheduled.clone());
                scheduled
            }
        };
        let cost = total_cost(inst, &solution)?;
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((solution.clone(), cost));
        }
        history.compositions.insert(n, compositions(inst, &solution));
        let stop = count >= cfg.repeat_limit
            || start.elapsed() >= cfg.time_limit
            || cfg.max_iterations.is_some_and(|m| n >= m);
        let update = (!stop).then(|| modify_costs(inst, n, &routes, &solution, &adm, &whole, &history, cfg.mode));
        log.records.push(IterationRecord {
            iteration: n,
            fingerprint: fp,
            routing_objective: res.objective,
            routing_status: res.status.to_string(),
            scheduling_savings: savings,
            cost: cost.to_f64(),
            best_cost: best.as_ref().map_or(f64::NAN, |(_, c)| c.to_f64()),
            platoons: solution.platoons.iter().map(|p| (p.tail, p.head, p.members.clone())).collect(),
            fallbacks: update.as_ref().map_or(0, |u| u.fallbacks),
            elapsed_s: start.elapsed().as_secs_f64(),
        });
        log::info!(
            "iteration {n}: routing {:.4} ({}), cost {:.4}, best {:.4}",
            res.objective,
            res.status,
            cost.to_f64(),
            best.as_ref().map_or(f64::NAN, |(_, c)| c.to_f64())
        );
        let Some(update) = update else { break };
        history.tables.insert(n + 1, update.table.clone());
        history.scenarios.insert(n + 1, update.scenarios);
        costs = update.table;
        previous = paths;
    }
    let (solution, cost) = best.ok_or(Error::NoFeasibleSolution)?;
    Ok(DecompositionOutcome { solution, cost, lower_bound, log, history, elapsed: start.elapsed() })
}

fn schedule<S: Scalar>(
    inst: &Instance<S>,
    routes: &FixedRoutes,
    cfg: &DecompositionConfig,
    limit: Duration,
) -> Result<(PlatoonSolution, f64)> {
    let mip = MipConfig { time_limit: Some(limit), ..cfg.mip.clone() };
    match cfg.scheduler {
        Scheduler::Exact => {
            let tif = build_tif(inst, routes.clone(), TifVariant::Exact)?;
            let mip = MipConfig { initial_solution: Some(tif.earliest_hint(inst)), ..mip };
            let res = solve(&tif.model, &mip)?;
            if res.status == MipStatus::NoSolutionTimeLimit || res.status == MipStatus::Infeasible {
                return Err(Error::NoFeasibleSolution);
            }
            Ok((decode_tif(inst, &tif, &res)?, res.objective))
        }
        Scheduler::Pairwise { gamma } => {
            let out = pairwise_schedule(inst, routes, gamma, &mip)?;
            let savings = routes.cost(inst) - total_cost(inst, &out.solution)?;
            Ok((out.solution, savings.to_f64()))
        }
    }
}
