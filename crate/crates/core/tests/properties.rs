mod common;

use std::collections::BTreeSet;

use common::{exact, simple_paths, small_instance, tpp_optimum};
use platoon_core::decomposition::{run, CostMode, DecompositionConfig, Scheduler};
use platoon_core::evaluate::{check, total_cost};
use platoon_core::formulations::{
    build_fcnf, scheduling_preprocess, vehicle_data, ArcCost, CostTable, FixedRoutes,
};
use platoon_core::instance::Vehicle;
use platoon_core::network::{build_time_space, TimeGridMode};
use platoon_core::pairwise::pairwise_schedule;
use platoon_core::{Rational64, Scalar};
use platoon_mip::{solve, MipConfig};
use proptest::prelude::*;

/// Optimal paths of the exact model, as arc lists.
fn optimal_paths(inst: &platoon_core::ExactInstance) -> Vec<Vec<usize>> {
    let (sol, _) = exact::cpf(inst);
    sol.routes
        .iter()
        .map(|r| r.arcs.iter().map(|a| inst.network.find_arc(a.tail, a.head).unwrap()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn travel_times_match_simple_path_enumeration(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let net = &inst.network;
        for i in 0..net.num_nodes() {
            for j in 0..net.num_nodes() {
                let brute = if i == j { Some(0) } else { simple_paths(net, i, j).iter().map(|p| p.1).min() };
                prop_assert_eq!(inst.travel_times().get(i, j), brute, "{} -> {}", i, j);
            }
        }
    }

    #[test]
    fn full_grid_has_one_move_per_feasible_start(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let tsn = build_time_space(&inst, TimeGridMode::Full).unwrap();
        let expected: i64 = inst.network.arcs().iter().map(|a| (inst.horizon - a.time + 1).max(0)).sum();
        prop_assert_eq!(tsn.ts_arcs.len() as i64, expected);
    }

    #[test]
    fn pruning_keeps_a_time_feasible_path(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (_, adm) = vehicle_data(&inst).unwrap();
        for (v, a) in adm.iter().enumerate() {
            let veh = &inst.vehicles[v];
            let kept: Vec<_> = simple_paths(&inst.network, veh.origin, veh.dest)
                .into_iter()
                .filter(|(p, t)| *t <= veh.budget() && p.iter().all(|&k| a.contains(k)))
                .collect();
            prop_assert!(!kept.is_empty(), "vehicle {} lost every path", v);
            prop_assert!(kept.iter().any(|(p, _)| *p == a.best_path));
        }
    }

    #[test]
    fn exact_incumbents_check_and_price_as_the_objective(seed in any::<u64>()) {
        let inst = small_instance(seed);
        for (sol, obj) in [exact::cpf(&inst), exact::tsf(&inst)] {
            prop_assert!(check(&inst, &sol).is_ok());
            prop_assert!((total_cost(&inst, &sol).unwrap().to_f64() - obj).abs() < 1e-6);
        }
        let paths = optimal_paths(&inst);
        let fixed: Rational64 = paths.iter().map(|p| inst.network.path_cost(p)).sum();
        let (sol, savings) = exact::tif(&inst, paths);
        prop_assert!(check(&inst, &sol).is_ok());
        prop_assert!((total_cost(&inst, &sol).unwrap().to_f64() - (fixed.to_f64() - savings)).abs() < 1e-6);
    }

    #[test]
    fn routing_bound_and_heuristics_sandwich_the_optimum(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (best, _) = tpp_optimum(&inst);
        let (_, adm) = vehicle_data(&inst).unwrap();
        let fcnf = build_fcnf(&inst, &adm, &CostTable::base(&inst, &adm)).unwrap();
        let lb = solve(&fcnf.model, &MipConfig::default()).unwrap().objective;
        prop_assert!(lb <= best.to_f64() + 1e-6, "routing bound {} above optimum {}", lb, best);
        for (mode, scheduler) in [
            (CostMode::Icmp, Scheduler::Exact),
            (CostMode::Llcmp, Scheduler::Exact),
            (CostMode::Icmp, Scheduler::Pairwise { gamma: 0.5 }),
        ] {
            let out = run(&inst, &DecompositionConfig { mode, scheduler, ..Default::default() }).unwrap();
            prop_assert!(check(&inst, &out.solution).is_ok());
            prop_assert!(best <= out.cost, "{:?} {:?} beat the optimum", mode, scheduler);
            prop_assert!(out.lower_bound <= best.to_f64() + 1e-6);
        }
    }

    #[test]
    fn modified_costs_stay_between_unit_and_solo_cost(seed in any::<u64>()) {
        let inst = small_instance(seed);
        for mode in [CostMode::Icmp, CostMode::Llcmp] {
            let out = run(&inst, &DecompositionConfig { mode, ..Default::default() }).unwrap();
            for table in out.history.tables.values() {
                for (&(_, k), cost) in table.iter() {
                    let a = inst.network.arc(k);
                    let (u, f) = (a.unit_cost(inst.eta), a.fixed_cost(inst.eta));
                    match *cost {
                        ArcCost::Split { unit, fixed } => prop_assert!(unit == u && fixed == f),
                        ArcCost::Single(c) => prop_assert!(u <= c && c <= u + f, "{} outside [{}, {}]", c, u, u + f),
                    }
                }
            }
        }
    }

    #[test]
    fn preprocess_keeps_fewer_arcs_as_windows_tighten(seed in any::<u64>(), cut in prop::collection::vec((0i64..3, 0i64..3), 5)) {
        let inst = small_instance(seed);
        let paths = optimal_paths(&inst);
        let routes = FixedRoutes::new(&inst, paths.clone()).unwrap();
        let wide = scheduling_preprocess(&inst, &routes);
        let tight: Vec<Vehicle> = inst
            .vehicles
            .iter()
            .zip(&cut)
            .zip(&paths)
            .map(|((v, &(a, b)), p)| {
                let slack = v.budget() - inst.network.path_time(p);
                let a = a.min(slack);
                let b = b.min(slack - a);
                Vehicle { earliest: v.earliest + a, latest: v.latest - b, ..*v }
            })
            .collect();
        let narrowed = inst.with_vehicles(tight).unwrap();
        let tight_routes = FixedRoutes::new(&narrowed, paths).unwrap();
        let narrow = scheduling_preprocess(&narrowed, &tight_routes);
        for (w, n) in wide.kept.iter().zip(&narrow.kept) {
            for (&w, &n) in w.iter().zip(n) {
                prop_assert!(w || !n);
            }
        }
        prop_assert!(narrow.num_kept() <= wide.num_kept());
    }

    #[test]
    fn pairwise_contracts_hold(seed in any::<u64>(), gamma in 0.1f64..=1.0) {
        let inst = small_instance(seed);
        let paths = optimal_paths(&inst);
        let routes = FixedRoutes::new(&inst, paths.clone()).unwrap();
        let out = pairwise_schedule(&inst, &routes, gamma, &MipConfig::default()).unwrap();
        let mut used = BTreeSet::new();
        for &c in &out.chosen {
            let pc = &out.candidates[c];
            prop_assert!(used.insert(pc.u) && used.insert(pc.v), "vehicle in two pairs");
        }
        prop_assert!(out.chosen.len() <= (gamma * inst.num_vehicles() as f64).floor() as usize);
        for (v, s) in out.shrunk.iter().enumerate() {
            let o = &inst.vehicles[v];
            prop_assert!(o.earliest <= s.earliest && s.latest <= o.latest);
            prop_assert!(s.latest - s.earliest >= inst.network.path_time(&paths[v]));
        }
        prop_assert!(check(&inst, &out.solution).is_ok());
        let (best, _) = exact::tif(&inst, paths);
        prop_assert!(total_cost(&inst, &out.solution).unwrap() >= total_cost(&inst, &best).unwrap());
    }
}
