//! Solver-agnostic representation of a mixed-integer linear program.

use std::collections::HashMap;
use std::fmt;

use crate::error::{MipError, Result};

/// Index of a variable inside a [`MipModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Amount by which `values` violate this row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: ObjectiveSense,
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl Default for Objective {
    fn default() -> Self {
        Self { sense: ObjectiveSense::Minimize, terms: Vec::new(), constant: 0.0 }
    }
}

/// Variables, linear constraints and a linear objective.
///
/// Builders in this crate never panic on bad input; [`MipModel::validate`]
/// reports the first violated invariant instead, and [`crate::solve`] calls
/// it before doing any work.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MipModel {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
}

impl MipModel {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64) -> VarId {
        let (lower, upper) = match kind {
            VarKind::Binary => (lower.max(0.0), upper.min(1.0)),
            _ => (lower, upper),
        };
        self.variables.push(Variable { name: name.into(), kind, lower, upper });
        VarId(self.variables.len() - 1)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    pub fn add_integer(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> VarId {
        self.add_var(name, VarKind::Integer, lower, upper)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> VarId {
        self.add_var(name, VarKind::Continuous, lower, upper)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> usize {
        self.constraints.push(Constraint { name: name.into(), terms, sense, rhs });
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, sense: ObjectiveSense, terms: Vec<(VarId, f64)>, constant: f64) {
        self.objective = Objective { sense, terms, constant };
    }

    /// Adds `coeff` to the objective coefficient of `var`.
    pub fn add_objective_term(&mut self, var: VarId, coeff: f64) {
        self.objective.terms.push((var, coeff));
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn find_var(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name).map(VarId)
    }

    /// Dense objective coefficient vector with duplicate terms summed.
    pub fn objective_coefficients(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.variables.len()];
        for &(v, coeff) in &self.objective.terms {
            c[v.0] += coeff;
        }
        c
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.constant + self.objective.terms.iter().map(|&(v, c)| c * values[v.0]).sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        let mut seen: HashMap<&str, usize> = HashMap::with_capacity(n);
        for (i, var) in self.variables.iter().enumerate() {
            if var.name.is_empty() {
                return Err(MipError::ModelInvalid(format!("variable {i} has an empty name")));
            }
            if let Some(prev) = seen.insert(var.name.as_str(), i) {
                return Err(MipError::ModelInvalid(format!(
                    "variable name `{}` used by {prev} and {i}",
                    var.name
                )));
            }
            if var.lower.is_nan() || var.upper.is_nan() || var.lower > var.upper {
                return Err(MipError::ModelInvalid(format!(
                    "variable `{}` has bounds [{}, {}]",
                    var.name, var.lower, var.upper
                )));
            }
        }
        let check_terms = |what: &str, terms: &[(VarId, f64)]| -> Result<()> {
            for &(v, c) in terms {
                if v.0 >= n {
                    return Err(MipError::ModelInvalid(format!("{what} references undeclared variable {}", v.0)));
                }
                if !c.is_finite() {
                    return Err(MipError::ModelInvalid(format!("{what} has a non-finite coefficient")));
                }
            }
            Ok(())
        };
        check_terms("objective", &self.objective.terms)?;
        if !self.objective.constant.is_finite() {
            return Err(MipError::ModelInvalid("objective constant is not finite".into()));
        }
        for con in &self.constraints {
            check_terms(&format!("constraint `{}`", con.name), &con.terms)?;
            if !con.rhs.is_finite() {
                return Err(MipError::ModelInvalid(format!("constraint `{}` has a non-finite rhs", con.name)));
            }
        }
        Ok(())
    }

    /// Largest bound, integrality or row violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (var, &x) in self.variables.iter().zip(values) {
            worst = worst.max(var.lower - x).max(x - var.upper);
            if var.kind.is_integral() {
                worst = worst.max((x - x.round()).abs());
            }
        }
        for con in &self.constraints {
            worst = worst.max(con.violation(values));
        }
        worst
    }

    pub fn is_feasible(&self, values: &[f64], tol: f64) -> bool {
        values.len() == self.variables.len() && self.max_violation(values) <= tol
    }
}
