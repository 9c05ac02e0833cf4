use std::time::Duration;

use platoon_mip::{
    lp_bound, solve, BranchRule, MipConfig, MipModel, MipStatus, NodeOrder, ObjectiveSense, Sense, VarId,
};
use proptest::prelude::*;

/// Best objective over every integer point in the (small, bounded) box.
fn enumerate(model: &MipModel) -> Option<f64> {
    let ranges: Vec<(i64, i64)> =
        model.variables.iter().map(|v| (v.lower.ceil() as i64, v.upper.floor() as i64)).collect();
    let mut point: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|r| r.0 > r.1) {
        return None;
    }
    let maximize = model.objective.sense == ObjectiveSense::Maximize;
    let mut best: Option<f64> = None;
    loop {
        let values: Vec<f64> = point.iter().map(|&x| x as f64).collect();
        if model.is_feasible(&values, 1e-9) {
            let obj = model.objective_value(&values);
            best = Some(match best {
                None => obj,
                Some(b) if maximize => b.max(obj),
                Some(b) => b.min(obj),
            });
        }
        let mut k = 0;
        loop {
            if k == point.len() {
                return best;
            }
            if point[k] < ranges[k].1 {
                point[k] += 1;
                break;
            }
            point[k] = ranges[k].0;
            k += 1;
        }
    }
}

#[test]
fn free_binary_minimizes_to_zero() {
    let mut m = MipModel::new("one");
    let x = m.add_binary("x");
    m.set_objective(ObjectiveSense::Minimize, vec![(x, 1.0)], 0.0);
    let r = solve(&m, &MipConfig::default()).unwrap();
    assert_eq!(r.status, MipStatus::Optimal);
    assert_eq!(r.objective, 0.0);
    assert_eq!(r.value(x), 0.0);
}

#[test]
fn three_binary_model_matches_enumeration() {
    let mut m = MipModel::new("three");
    let v: Vec<VarId> = (0..3).map(|i| m.add_binary(format!("x{i}"))).collect();
    m.add_constraint("c0", vec![(v[0], 2.0), (v[1], 3.0), (v[2], 4.0)], Sense::Le, 6.0);
    m.add_constraint("c1", vec![(v[0], 1.0), (v[2], 1.0)], Sense::Ge, 1.0);
    m.set_objective(ObjectiveSense::Maximize, vec![(v[0], 3.0), (v[1], 4.0), (v[2], 5.5)], 0.0);
    let r = solve(&m, &MipConfig::default()).unwrap();
    assert_eq!(r.status, MipStatus::Optimal);
    assert!((r.objective - enumerate(&m).unwrap()).abs() < 1e-9);
    assert!((r.objective - 8.5).abs() < 1e-9);
}

#[test]
fn infeasible_model_is_reported() {
    let mut m = MipModel::new("inf");
    let x = m.add_binary("x");
    let y = m.add_binary("y");
    m.add_constraint("c", vec![(x, 1.0), (y, 1.0)], Sense::Ge, 3.0);
    let r = solve(&m, &MipConfig::default()).unwrap();
    assert_eq!(r.status, MipStatus::Infeasible);
    assert!(r.values.is_empty());
}

#[test]
fn integer_only_infeasibility_is_found_by_branching() {
    // 2x = 1 has an LP solution but no integer one.
    let mut m = MipModel::new("parity");
    let x = m.add_integer("x", 0.0, 5.0);
    m.add_constraint("c", vec![(x, 2.0)], Sense::Eq, 1.0);
    let r = solve(&m, &MipConfig::default()).unwrap();
    assert_eq!(r.status, MipStatus::Infeasible);
}

#[test]
fn invalid_model_is_rejected() {
    let mut m = MipModel::new("bad");
    m.add_binary("x");
    m.add_binary("x");
    assert!(solve(&m, &MipConfig::default()).is_err());
    let mut m = MipModel::new("bad bounds");
    m.add_continuous("x", 2.0, 1.0);
    assert!(solve(&m, &MipConfig::default()).is_err());
}

#[test]
fn unbounded_model_is_an_error() {
    let mut m = MipModel::new("unb");
    let x = m.add_integer("x", 0.0, f64::INFINITY);
    m.set_objective(ObjectiveSense::Maximize, vec![(x, 1.0)], 0.0);
    assert!(solve(&m, &MipConfig::default()).is_err());
}

#[test]
fn lp_bound_of_covering_toy_is_below_integer_optimum() {
    // Cover three elements with sets {0,1}, {1,2}, {0,2}: LP 1.5, integer 2.
    let mut m = MipModel::new("cover");
    let s: Vec<VarId> = (0..3).map(|i| m.add_binary(format!("s{i}"))).collect();
    m.add_constraint("e0", vec![(s[0], 1.0), (s[2], 1.0)], Sense::Ge, 1.0);
    m.add_constraint("e1", vec![(s[0], 1.0), (s[1], 1.0)], Sense::Ge, 1.0);
    m.add_constraint("e2", vec![(s[1], 1.0), (s[2], 1.0)], Sense::Ge, 1.0);
    m.set_objective(ObjectiveSense::Minimize, s.iter().map(|&v| (v, 1.0)).collect(), 0.0);
    let lb = lp_bound(&m).unwrap();
    let r = solve(&m, &MipConfig::default()).unwrap();
    assert!((lb - 1.5).abs() < 1e-9);
    assert!((r.objective - 2.0).abs() < 1e-9);
    assert!(r.bound_history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
}

#[test]
fn lp_bound_of_network_flow_equals_integer_optimum() {
    // Min-cost flow of 2 units from 0 to 3 with unit capacities.
    let arcs = [(0, 1, 1.0), (0, 2, 2.0), (1, 3, 2.0), (2, 3, 1.0), (1, 2, 0.5)];
    let mut m = MipModel::new("flow");
    let x: Vec<VarId> = arcs.iter().map(|&(i, j, _)| m.add_binary(format!("x_{i}_{j}"))).collect();
    for node in 0..4 {
        let mut terms = Vec::new();
        for (k, &(i, j, _)) in arcs.iter().enumerate() {
            if i == node {
                terms.push((x[k], 1.0));
            }
            if j == node {
                terms.push((x[k], -1.0));
            }
        }
        let supply = match node {
            0 => 2.0,
            3 => -2.0,
            _ => 0.0,
        };
        m.add_constraint(format!("flow_{node}"), terms, Sense::Eq, supply);
    }
    m.set_objective(ObjectiveSense::Minimize, x.iter().zip(&arcs).map(|(&v, a)| (v, a.2)).collect(), 0.0);
    let lb = lp_bound(&m).unwrap();
    let r = solve(&m, &MipConfig::default()).unwrap();
    assert!((lb - r.objective).abs() < 1e-9);
    assert!((r.objective - enumerate(&m).unwrap()).abs() < 1e-9);
}

#[test]
fn empty_objective_bound_is_the_constant() {
    let mut m = MipModel::new("const");
    let x = m.add_continuous("x", 0.0, 1.0);
    m.add_constraint("c", vec![(x, 1.0)], Sense::Le, 1.0);
    m.set_objective(ObjectiveSense::Minimize, vec![], 4.25);
    assert_eq!(lp_bound(&m).unwrap(), 4.25);
    let empty = MipModel::new("empty");
    assert_eq!(lp_bound(&empty).unwrap(), 0.0);
}

#[test]
fn time_limit_keeps_the_hint_as_incumbent() {
    let mut m = MipModel::new("hint");
    let v: Vec<VarId> = (0..4).map(|i| m.add_binary(format!("x{i}"))).collect();
    m.add_constraint("c", v.iter().map(|&x| (x, 1.0)).collect(), Sense::Ge, 1.0);
    m.set_objective(ObjectiveSense::Minimize, v.iter().map(|&x| (x, 1.0)).collect(), 0.0);
    let cfg = MipConfig::default().with_time_limit(Duration::ZERO).with_initial_solution(vec![1.0, 1.0, 0.0, 0.0]);
    let r = solve(&m, &cfg).unwrap();
    assert_eq!(r.status, MipStatus::FeasibleTimeLimit);
    assert_eq!(r.objective, 2.0);
    assert!(r.best_bound <= r.objective);
}

fn random_model(
    n: usize,
    rows: Vec<(Vec<i32>, i32, u8)>,
    obj: Vec<i32>,
    maximize: bool,
    kinds: Vec<bool>,
) -> MipModel {
    let mut m = MipModel::new("rand");
    let vars: Vec<VarId> = (0..n)
        .map(|i| if kinds[i] { m.add_binary(format!("b{i}")) } else { m.add_integer(format!("z{i}"), -1.0, 2.0) })
        .collect();
    for (r, (coefs, rhs, sense)) in rows.into_iter().enumerate() {
        let sense = match sense % 3 {
            0 => Sense::Le,
            1 => Sense::Ge,
            _ => Sense::Eq,
        };
        let terms = vars.iter().zip(coefs).filter(|(_, c)| *c != 0).map(|(&v, c)| (v, c as f64)).collect();
        m.add_constraint(format!("r{r}"), terms, sense, rhs as f64);
    }
    let sense = if maximize { ObjectiveSense::Maximize } else { ObjectiveSense::Minimize };
    m.set_objective(sense, vars.iter().zip(obj).map(|(&v, c)| (v, c as f64)).collect(), 0.5);
    m
}

fn model_strategy() -> impl Strategy<Value = MipModel> {
    (2usize..=5).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((prop::collection::vec(-4i32..=4, n), -3i32..=6, 0u8..3), 1..=4),
            prop::collection::vec(-5i32..=5, n),
            any::<bool>(),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(n, rows, obj, max, kinds)| random_model(n, rows, obj, max, kinds))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solve_matches_enumeration(model in model_strategy()) {
        let expected = enumerate(&model);
        let r = solve(&model, &MipConfig::default()).unwrap();
        match expected {
            None => prop_assert_eq!(r.status, MipStatus::Infeasible),
            Some(best) => {
                prop_assert_eq!(r.status, MipStatus::Optimal);
                prop_assert!((r.objective - best).abs() < 1e-6, "solver {} vs enumeration {}", r.objective, best);
                prop_assert!(model.is_feasible(&r.values, 1e-6));
                prop_assert!((r.objective - r.best_bound).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn every_rule_reaches_the_same_optimum(model in model_strategy()) {
        let base = solve(&model, &MipConfig::default()).unwrap();
        for (order, rule) in [(NodeOrder::DepthFirst, BranchRule::FirstFractional), (NodeOrder::BestBound, BranchRule::FirstFractional)] {
            let cfg = MipConfig { node_order: order, branch_rule: rule, dive: false, ..MipConfig::default() };
            let r = solve(&model, &cfg).unwrap();
            prop_assert_eq!(r.status, base.status);
            if base.status == MipStatus::Optimal {
                prop_assert!((r.objective - base.objective).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn bound_history_is_monotone(model in model_strategy()) {
        let r = solve(&model, &MipConfig::default()).unwrap();
        let maximize = model.objective.sense == ObjectiveSense::Maximize;
        for w in r.bound_history.windows(2) {
            if maximize {
                prop_assert!(w[1] <= w[0] + 1e-9);
            } else {
                prop_assert!(w[1] >= w[0] - 1e-9);
            }
        }
    }

    #[test]
    fn solving_is_deterministic(model in model_strategy()) {
        let a = solve(&model, &MipConfig::default()).unwrap();
        let b = solve(&model, &MipConfig::default()).unwrap();
        prop_assert_eq!(a.values, b.values);
        prop_assert_eq!(a.nodes, b.nodes);
    }
}
