//! Branch-and-bound over LP relaxations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use log::{debug, warn};
use microlp::Solution;

use crate::error::{MipError, Result};
use crate::model::{MipModel, ObjectiveSense, VarKind};
use crate::relax::{outcome, Relaxation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeOrder {
    /// Lowest relaxation bound first; ties go to the deeper node, then the older one.
    #[default]
    BestBound,
    DepthFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    /// Fractional part closest to one half; ties to the lowest index.
    #[default]
    MostFractional,
    /// Lowest-index fractional variable.
    FirstFractional,
}

#[derive(Debug, Clone)]
pub struct MipConfig {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub gap_abs: f64,
    pub gap_rel: f64,
    pub feasibility_tol: f64,
    pub integrality_tol: f64,
    pub node_order: NodeOrder,
    pub branch_rule: BranchRule,
    /// Candidate assignment tried as the first incumbent. Ignored unless feasible.
    pub initial_solution: Option<Vec<f64>>,
    /// Run a rounding dive from the root when no incumbent is known.
    pub dive: bool,
}

impl Default for MipConfig {
    fn default() -> Self {
        Self {
            time_limit: None,
            node_limit: None,
            gap_abs: 1e-6,
            gap_rel: 1e-9,
            feasibility_tol: 1e-6,
            integrality_tol: 1e-6,
            node_order: NodeOrder::BestBound,
            branch_rule: BranchRule::MostFractional,
            initial_solution: None,
            dive: true,
        }
    }
}

impl MipConfig {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_initial_solution(mut self, values: Vec<f64>) -> Self {
        self.initial_solution = Some(values);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MipStatus {
    Optimal,
    FeasibleTimeLimit,
    Infeasible,
    NoSolutionTimeLimit,
}

impl std::fmt::Display for MipStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MipStatus::Optimal => "optimal",
            MipStatus::FeasibleTimeLimit => "feasible (limit reached)",
            MipStatus::Infeasible => "infeasible",
            MipStatus::NoSolutionTimeLimit => "no solution (limit reached)",
        })
    }
}

impl MipStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, MipStatus::Optimal | MipStatus::FeasibleTimeLimit)
    }
}

#[derive(Debug, Clone)]
pub struct MipResult {
    pub status: MipStatus,
    /// Incumbent values, empty when there is none.
    pub values: Vec<f64>,
    /// Incumbent objective including the constant term; NaN without an incumbent.
    pub objective: f64,
    /// Proven bound in the model's own sense (lower bound when minimizing).
    pub best_bound: f64,
    pub wall_time: Duration,
    pub nodes: u64,
    /// Global bound after each processed node, in the model's own sense.
    pub bound_history: Vec<f64>,
}

impl MipResult {
    pub fn value(&self, var: crate::model::VarId) -> f64 {
        self.values[var.0]
    }

    /// |objective − bound| / |bound|, or 0 when both are equal.
    pub fn relative_gap(&self) -> f64 {
        let diff = (self.objective - self.best_bound).abs();
        if diff <= 1e-12 {
            0.0
        } else {
            diff / self.best_bound.abs().max(1e-12)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct BoundChange {
    var: usize,
    lower: f64,
    upper: f64,
}

struct OpenNode {
    id: u64,
    depth: usize,
    bound: f64,
    changes: Vec<BoundChange>,
    order: NodeOrder,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for OpenNode {}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpenNode {
    // BinaryHeap pops the greatest element.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_bound = other.bound.total_cmp(&self.bound);
        let by_depth = self.depth.cmp(&other.depth);
        let by_id = other.id.cmp(&self.id);
        match self.order {
            NodeOrder::BestBound => by_bound.then(by_depth).then(by_id),
            NodeOrder::DepthFirst => by_depth.then(by_bound).then(by_id),
        }
    }
}

/// Solves `model` to optimality or until a limit is hit.
pub fn solve(model: &MipModel, cfg: &MipConfig) -> Result<MipResult> {
    model.validate()?;
    Solver::new(model, cfg).run()
}

struct Solver<'a> {
    model: &'a MipModel,
    cfg: &'a MipConfig,
    relax: Relaxation,
    start: Instant,
    integral: Vec<usize>,
    /// Incumbent in internal minimization space.
    incumbent: Option<(f64, Vec<f64>)>,
    nodes: u64,
    history: Vec<f64>,
    global_bound: f64,
    cache: Option<(Vec<BoundChange>, Solution)>,
}

impl<'a> Solver<'a> {
    fn new(model: &'a MipModel, cfg: &'a MipConfig) -> Self {
        let integral = model
            .variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind.is_integral())
            .map(|(i, _)| i)
            .collect();
        Self {
            model,
            cfg,
            relax: Relaxation::new(model),
            start: Instant::now(),
            integral,
            incumbent: None,
            nodes: 0,
            history: Vec::new(),
            global_bound: f64::NEG_INFINITY,
            cache: None,
        }
    }

    fn sign(&self) -> f64 {
        match self.model.objective.sense {
            ObjectiveSense::Minimize => 1.0,
            ObjectiveSense::Maximize => -1.0,
        }
    }

    fn remaining(&self) -> Option<Duration> {
        self.cfg.time_limit.map(|t| t.saturating_sub(self.start.elapsed()))
    }

    fn out_of_time(&self) -> bool {
        self.remaining().is_some_and(|r| r.is_zero())
    }

    fn internal_objective(&self, values: &[f64]) -> f64 {
        self.sign() * self.model.objective_value(values)
    }

    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((obj, _)) => obj - self.cfg.gap_abs.max(self.cfg.gap_rel * obj.abs()),
            None => f64::INFINITY,
        }
    }

    /// Accepts `values` as incumbent if it is feasible and improving.
    fn offer(&mut self, values: &[f64]) -> bool {
        let mut rounded = values.to_vec();
        for &i in &self.integral {
            rounded[i] = rounded[i].round();
        }
        let candidate = if self.model.is_feasible(&rounded, self.cfg.feasibility_tol) {
            rounded
        } else if self.model.is_feasible(values, self.cfg.feasibility_tol) {
            values.to_vec()
        } else {
            return false;
        };
        let obj = self.internal_objective(&candidate);
        if self.incumbent.as_ref().is_none_or(|(best, _)| obj < *best - 1e-12) {
            debug!("new incumbent {} after {} nodes", self.sign() * obj, self.nodes);
            self.incumbent = Some((obj, candidate));
            true
        } else {
            false
        }
    }

    fn fractional(&self, values: &[f64]) -> Option<usize> {
        let tol = self.cfg.integrality_tol;
        let mut best: Option<(usize, f64)> = None;
        for &i in &self.integral {
            let f = values[i] - values[i].floor();
            let dist = f.min(1.0 - f);
            if dist <= tol {
                continue;
            }
            match self.cfg.branch_rule {
                BranchRule::FirstFractional => return Some(i),
                BranchRule::MostFractional => {
                    if best.is_none_or(|(_, d)| dist > d + 1e-12) {
                        best = Some((i, dist));
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }

    /// Applies one bound change to a solved relaxation.
    fn apply(&self, sol: Solution, change: BoundChange) -> Result<Solution> {
        let var = self.relax.vars[change.var];
        if change.lower == change.upper {
            return outcome(sol.fix_var(var, change.lower));
        }
        let orig = &self.model.variables[change.var];
        let sol = if change.lower > orig.lower {
            outcome(sol.add_constraint([(var, 1.0)], microlp::ComparisonOp::Ge, change.lower))?
        } else {
            sol
        };
        if change.upper < orig.upper {
            outcome(sol.add_constraint([(var, 1.0)], microlp::ComparisonOp::Le, change.upper))
        } else {
            Ok(sol)
        }
    }

    /// Solves the relaxation with `changes` applied, reusing the cached
    /// parent solution when its change list is a prefix.
    fn node_solution(&mut self, root: &Solution, changes: &[BoundChange]) -> Result<Solution> {
        let (mut sol, done) = match &self.cache {
            Some((prefix, sol)) if prefix.len() <= changes.len() && changes.starts_with(prefix) => {
                (sol.clone(), prefix.len())
            }
            _ => (root.clone(), 0),
        };
        for &c in &changes[done..] {
            sol = self.apply(sol, c)?;
        }
        Ok(sol)
    }

    fn child_changes(&self, changes: &[BoundChange], var: usize, lower: f64, upper: f64) -> Vec<BoundChange> {
        // Later changes on the same variable supersede earlier ones, but
        // only when they are tighter, so replaying in order is consistent.
        let mut out = changes.to_vec();
        out.push(BoundChange { var, lower, upper });
        out
    }

    fn current_bounds(&self, changes: &[BoundChange], var: usize) -> (f64, f64) {
        let v = &self.model.variables[var];
        let (mut lo, mut hi) = (v.lower, v.upper);
        for c in changes.iter().filter(|c| c.var == var) {
            lo = lo.max(c.lower);
            hi = hi.min(c.upper);
        }
        (lo, hi)
    }

    /// Fixes near-integral variables one at a time until the relaxation is
    /// integral or infeasible.
    fn dive(&mut self, root: &Solution) {
        let mut sol = root.clone();
        let limit = self.integral.len() + 1;
        for _ in 0..limit {
            if self.out_of_time() {
                return;
            }
            let values = self.relax.values(&sol);
            if self.fractional(&values).is_none() {
                self.offer(&values);
                return;
            }
            self.offer(&values);
            // Fix every integral-valued integer variable that is still free,
            // plus the fractional one closest to an integer.
            let tol = self.cfg.integrality_tol;
            let mut pick: Option<(usize, f64, f64)> = None;
            for &i in &self.integral {
                let x = values[i];
                let dist = (x - x.round()).abs();
                if dist > tol && pick.is_none_or(|(_, _, d)| dist < d) {
                    pick = Some((i, x.round(), dist));
                }
            }
            let Some((var, target, _)) = pick else { return };
            let kind = self.model.variables[var].kind;
            let next = if kind == VarKind::Binary {
                sol.fix_var(self.relax.vars[var], target)
            } else {
                sol.add_constraint([(self.relax.vars[var], 1.0)], microlp::ComparisonOp::Eq, target)
            };
            match outcome(next) {
                Ok(s) => sol = s,
                Err(_) => return,
            }
        }
    }

    fn finish(&self, status: MipStatus, open_bound: Option<f64>) -> MipResult {
        let sign = self.sign();
        let (objective, values) = match &self.incumbent {
            Some((_, vals)) => (self.model.objective_value(vals), vals.clone()),
            None => (f64::NAN, Vec::new()),
        };
        let bound_internal = match (status, &self.incumbent) {
            (MipStatus::Optimal, Some((obj, _))) => *obj,
            _ => {
                let mut b = open_bound.unwrap_or(f64::INFINITY);
                if let Some((obj, _)) = &self.incumbent {
                    b = b.min(*obj);
                }
                b.max(self.global_bound)
            }
        };
        let best_bound = sign * bound_internal;
        MipResult {
            status,
            values,
            objective,
            best_bound,
            wall_time: self.start.elapsed(),
            nodes: self.nodes,
            bound_history: self.history.iter().map(|b| sign * b).collect(),
        }
    }

    fn record_bound(&mut self, open_min: f64) {
        let mut b = open_min;
        if let Some((obj, _)) = &self.incumbent {
            b = b.min(*obj);
        }
        if b > self.global_bound {
            self.global_bound = b;
        }
        self.history.push(self.global_bound);
    }

    fn run(mut self) -> Result<MipResult> {
        let constant_internal = self.sign() * self.model.objective.constant;
        if let Some(hint) = self.cfg.initial_solution.clone() {
            if hint.len() == self.model.num_vars() && !self.offer(&hint) {
                debug!("initial solution rejected");
            }
        }
        if self.model.variables.is_empty() {
            let feasible = self.model.is_feasible(&[], self.cfg.feasibility_tol);
            if feasible {
                self.incumbent = Some((constant_internal, Vec::new()));
                return Ok(self.finish(MipStatus::Optimal, None));
            }
            return Ok(self.finish(MipStatus::Infeasible, None));
        }

        let root = match self.relax.solve(self.remaining()) {
            Ok(sol) => sol,
            Err(MipError::Infeasible) => return Ok(self.finish(MipStatus::Infeasible, None)),
            Err(MipError::Interrupted) => {
                let status = if self.incumbent.is_some() {
                    MipStatus::FeasibleTimeLimit
                } else {
                    MipStatus::NoSolutionTimeLimit
                };
                return Ok(self.finish(status, None));
            }
            Err(e) => return Err(e),
        };
        let root_bound = root.objective() + constant_internal;
        self.nodes = 1;
        let root_values = self.relax.values(&root);
        if self.fractional(&root_values).is_none() && self.offer(&root_values) {
            self.record_bound(root_bound);
            return Ok(self.finish(MipStatus::Optimal, None));
        }
        self.offer(&root_values);
        if self.incumbent.is_none() && self.cfg.dive {
            self.dive(&root);
        }

        let mut heap = BinaryHeap::new();
        let mut next_id = 0u64;
        let order = self.cfg.node_order;
        let mut push = |heap: &mut BinaryHeap<OpenNode>, depth, bound, changes| {
            heap.push(OpenNode { id: next_id, depth, bound, changes, order });
            next_id += 1;
        };
        // The root is expanded like any other node, starting from its solution.
        self.cache = Some((Vec::new(), root.clone()));
        push(&mut heap, 0, root_bound, Vec::new());
        self.record_bound(root_bound);

        let mut limited = false;
        while let Some(node) = heap.pop() {
            if node.bound >= self.cutoff() {
                continue;
            }
            if self.out_of_time() || self.cfg.node_limit.is_some_and(|n| self.nodes >= n) {
                heap.push(node);
                limited = true;
                break;
            }
            let sol = if node.changes.is_empty() {
                root.clone()
            } else {
                self.nodes += 1;
                match self.node_solution(&root, &node.changes) {
                    Ok(s) => s,
                    Err(MipError::Infeasible) => {
                        let open_min = heap.peek().map_or(f64::INFINITY, |n| n.bound);
                        self.record_bound(open_min);
                        continue;
                    }
                    Err(MipError::Interrupted) => {
                        heap.push(node);
                        limited = true;
                        break;
                    }
                    Err(MipError::Engine(msg)) => {
                        // Numerical trouble on one node; keep its parent bound
                        // open so the result stays honest.
                        warn!("relaxation failed at node {}: {msg}", self.nodes);
                        heap.push(OpenNode { bound: node.bound, ..node });
                        limited = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            };
            let bound = (sol.objective() + constant_internal).max(node.bound);
            let values = self.relax.values(&sol);
            match self.fractional(&values) {
                None => {
                    self.offer(&values);
                }
                Some(var) if bound < self.cutoff() => {
                    self.offer(&values);
                    let x = values[var];
                    let (lo, hi) = self.current_bounds(&node.changes, var);
                    let down = self.child_changes(&node.changes, var, lo, x.floor().max(lo));
                    let up = self.child_changes(&node.changes, var, x.ceil().min(hi), hi);
                    self.cache = Some((node.changes.clone(), sol));
                    push(&mut heap, node.depth + 1, bound, down);
                    push(&mut heap, node.depth + 1, bound, up);
                }
                Some(_) => {}
            }
            let open_min = heap.peek().map_or(f64::INFINITY, |n| n.bound);
            self.record_bound(open_min);
        }

        let open_min = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        let status = match (&self.incumbent, limited) {
            (Some(_), false) => MipStatus::Optimal,
            (Some((obj, _)), true) if open_min >= *obj - self.cfg.gap_abs.max(self.cfg.gap_rel * obj.abs()) => {
                MipStatus::Optimal
            }
            (Some(_), true) => MipStatus::FeasibleTimeLimit,
            (None, false) => MipStatus::Infeasible,
            (None, true) => MipStatus::NoSolutionTimeLimit,
        };
        Ok(self.finish(status, Some(open_min)))
    }
}
