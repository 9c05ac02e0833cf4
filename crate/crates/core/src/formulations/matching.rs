use std::collections::BTreeMap;

use platoon_mip::{MipModel, ObjectiveSense, Sense, VarId};

/// Maximum-weight matching with at most `floor(gamma * fleet)` pairs.
#[derive(Debug, Clone)]
pub struct MatchingModel {
    pub model: MipModel,
    /// One indicator per input pair, in input order.
    pub w: Vec<VarId>,
    pub max_pairs: usize,
}

pub fn build_matching(pairs: &[(usize, usize, f64)], gamma: f64, fleet: usize) -> MatchingModel {
    let max_pairs = (gamma * fleet as f64 + 1e-9).floor().max(0.0) as usize;
    let mut m = MipModel::new("matching");
    let mut degree: BTreeMap<usize, Vec<(VarId, f64)>> = BTreeMap::new();
    let mut w = Vec::with_capacity(pairs.len());
    for &(u, v, s) in pairs {
        let var = m.add_binary(format!("w_{u}_{v}"));
        m.add_objective_term(var, s);
        degree.entry(u).or_default().push((var, 1.0));
        degree.entry(v).or_default().push((var, 1.0));
        w.push(var);
    }
    for (v, terms) in degree {
        if terms.len() > 1 {
            m.add_constraint(format!("degree_{v}"), terms, Sense::Le, 1.0);
        }
    }
    if !w.is_empty() {
        m.add_constraint("count", w.iter().map(|&var| (var, 1.0)).collect(), Sense::Le, max_pairs as f64);
    }
    m.objective.sense = ObjectiveSense::Maximize;
    MatchingModel { model: m, w, max_pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use platoon_mip::{solve, MipConfig};

    #[test]
    fn picks_heavier_overlapping_pair() {
        let mm = build_matching(&[(0, 1, 3.0), (1, 2, 5.0)], 0.5, 3);
        let r = solve(&mm.model, &MipConfig::default()).unwrap();
        assert_eq!(r.objective, 5.0);
        assert_eq!(r.value(mm.w[1]), 1.0);
    }

    #[test]
    fn zero_gamma_selects_nothing() {
        let mm = build_matching(&[(0, 1, 3.0)], 0.0, 4);
        let r = solve(&mm.model, &MipConfig::default()).unwrap();
        assert_eq!(r.objective, 0.0);
    }

    #[test]
    fn disjoint_pairs_all_selected() {
        let mm = build_matching(&[(0, 1, 1.0), (2, 3, 2.0), (4, 5, 4.0)], 0.5, 6);
        assert_eq!(mm.max_pairs, 3);
        let r = solve(&mm.model, &MipConfig::default()).unwrap();
        assert_eq!(r.objective, 7.0);
    }
}
