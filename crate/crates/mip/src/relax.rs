//! LP relaxations through `microlp`.

use std::time::Duration;

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOptions, SolveOutcome, Solution, Variable as LpVar};

use crate::error::{MipError, Result};
use crate::model::{MipModel, ObjectiveSense, Sense};

/// A relaxation whose integrality restrictions have been dropped.
///
/// The objective is always stated as a minimization; maximization models
/// are negated on the way in.
pub(crate) struct Relaxation {
    pub problem: Problem,
    pub vars: Vec<LpVar>,
    pub sign: f64,
}

impl Relaxation {
    pub fn new(model: &MipModel) -> Self {
        let sign = match model.objective.sense {
            ObjectiveSense::Minimize => 1.0,
            ObjectiveSense::Maximize => -1.0,
        };
        let coeffs = model.objective_coefficients();
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<LpVar> = model
            .variables
            .iter()
            .zip(&coeffs)
            .map(|(v, &c)| problem.add_var(sign * c, (v.lower, v.upper)))
            .collect();
        for con in &model.constraints {
            let mut merged: Vec<(usize, f64)> = con.terms.iter().map(|&(v, c)| (v.0, c)).collect();
            merged.sort_by_key(|&(v, _)| v);
            merged.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
            let expr: Vec<(LpVar, f64)> =
                merged.into_iter().filter(|&(_, c)| c != 0.0).map(|(v, c)| (vars[v], c)).collect();
            if expr.is_empty() {
                continue;
            }
            problem.add_constraint(expr, op(con.sense), con.rhs);
        }
        Self { problem, vars, sign }
    }

    pub fn solve(&self, time_limit: Option<Duration>) -> Result<Solution> {
        let mut options = SolveOptions::default();
        options.time_limit = time_limit;
        outcome(self.problem.solve_with(options))
    }

    pub fn values(&self, sol: &Solution) -> Vec<f64> {
        self.vars.iter().map(|&v| sol.var_value_raw(v)).collect()
    }
}

pub(crate) fn op(sense: Sense) -> ComparisonOp {
    match sense {
        Sense::Le => ComparisonOp::Le,
        Sense::Eq => ComparisonOp::Eq,
        Sense::Ge => ComparisonOp::Ge,
    }
}

pub(crate) fn outcome(res: std::result::Result<SolveOutcome, microlp::Error>) -> Result<Solution> {
    match res {
        Ok(SolveOutcome::Solution(sol)) => Ok(sol),
        Ok(SolveOutcome::Interrupted(_)) => Err(MipError::Interrupted),
        Err(e) => Err(engine_error(e)),
    }
}

pub(crate) fn engine_error(e: microlp::Error) -> MipError {
    match e {
        microlp::Error::Infeasible => MipError::Infeasible,
        microlp::Error::Unbounded => MipError::Unbounded,
        other => MipError::Engine(other.to_string()),
    }
}

/// Optimum of the LP relaxation, in the model's own objective sense and
/// including the constant term.
pub fn lp_bound(model: &MipModel) -> Result<f64> {
    model.validate()?;
    if model.variables.is_empty() {
        if model.constraints.iter().any(|c| c.violation(&[]) > 1e-9) {
            return Err(MipError::Infeasible);
        }
        return Ok(model.objective.constant);
    }
    let relax = Relaxation::new(model);
    let sol = relax.solve(None)?;
    Ok(relax.sign * sol.objective() + model.objective.constant)
}
