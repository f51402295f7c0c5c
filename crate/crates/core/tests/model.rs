mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stochastic_steiner::{check_feasible, solution_cost, CostVector, EdgeSet, Scenario, SstpInstance, StochasticSolution};

/// 20 + 0.1905*31 + 0.1429*40 + 0.1429*44 + 0.3095*0 + 0.2142*43, by hand.
const REFERENCE_COST: f64 = 47.1197;

#[test]
fn ten_node_reference_is_feasible_with_known_cost() {
    let inst = ten_node();
    let sol = ten_node_reference(&inst);
    assert!(check_feasible(&inst, &sol).unwrap());
    assert!((sol.cost - REFERENCE_COST).abs() < 1e-9);
    assert_eq!(solution_cost(&inst, &sol).unwrap(), sol.cost);
}

#[test]
fn reference_without_first_stage_is_infeasible() {
    let inst = ten_node();
    let mut sol = ten_node_reference(&inst);
    sol.first_stage.clear();
    assert!(!check_feasible(&inst, &sol).unwrap());
}

fn with_probabilities(inst: &SstpInstance, probs: &[f64]) -> SstpInstance {
    let scenarios = inst
        .scenarios()
        .iter()
        .zip(probs)
        .map(|(s, &p)| Scenario::new(p, s.costs().clone(), s.terminals().to_vec()).unwrap())
        .collect();
    SstpInstance::new(inst.graph().clone(), inst.first_stage_costs().clone(), scenarios).unwrap()
}

proptest! {
    #[test]
    fn cost_is_linear_in_probabilities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_sstp(&mut rng, 7, 4);
        let m = inst.edge_count();
        let pick = |rng: &mut ChaCha8Rng| -> EdgeSet { (0..m).filter(|_| rng.gen_bool(0.3)).collect() };
        let first = pick(&mut rng);
        let per: Vec<EdgeSet> = (0..inst.scenario_count())
            .map(|_| pick(&mut rng).difference(&first).copied().collect())
            .collect();
        let sol = StochasticSolution::new(&inst, first.clone(), per.clone()).unwrap();

        let weights: Vec<f64> = (0..inst.scenario_count()).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let other = with_probabilities(&inst, &probs);
        let sol2 = StochasticSolution::new(&other, first.clone(), per.clone()).unwrap();

        let c0: f64 = first.iter().map(|&e| inst.first_stage_costs()[e]).sum();
        let expected: f64 = c0 + inst.scenarios().iter().zip(&per).zip(&probs)
            .map(|((s, set), p)| p * set.iter().map(|&e| s.costs()[e]).sum::<f64>())
            .sum::<f64>();
        prop_assert!((sol2.cost - expected).abs() <= 1e-9 * expected.max(1.0));

        let lambda = rng.gen_range(0.1..10.0);
        let scaled: Vec<f64> = inst.probabilities().iter().map(|p| p * lambda).collect();
        let sum: f64 = scaled.iter().sum();
        let renormalized: Vec<f64> = scaled.iter().map(|p| p / sum).collect();
        let same = with_probabilities(&inst, &renormalized);
        let sol3 = StochasticSolution::new(&same, first, per).unwrap();
        prop_assert!((sol3.cost - sol.cost).abs() <= 1e-9 * sol.cost.max(1.0));
    }

    #[test]
    fn adding_edges_keeps_feasibility(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_sstp(&mut rng, 7, 3);
        let m = inst.edge_count();
        let first: EdgeSet = (0..m).filter(|_| rng.gen_bool(0.3)).collect();
        let per: Vec<EdgeSet> = (0..inst.scenario_count())
            .map(|_| (0..m).filter(|e| !first.contains(e) && rng.gen_bool(0.5)).collect())
            .collect();
        let sol = StochasticSolution::new(&inst, first.clone(), per.clone()).unwrap();
        let before = check_feasible(&inst, &sol).unwrap();
        let s = rng.gen_range(0..inst.scenario_count());
        let mut grown = per;
        grown[s].extend((0..m).filter(|e| !first.contains(e)).take(rng.gen_range(0..=m)));
        let after = check_feasible(&inst, &StochasticSolution::new(&inst, first, grown).unwrap()).unwrap();
        prop_assert!(!before || after);
    }
}

#[test]
fn rejects_bad_probabilities() {
    let inst = ten_node();
    let scenarios: Vec<_> = inst
        .scenarios()
        .iter()
        .map(|s| Scenario::new(s.probability() * 0.9, s.costs().clone(), s.terminals().to_vec()).unwrap())
        .collect();
    assert!(SstpInstance::new(inst.graph().clone(), CostVector::new(vec![1.0; 15]).unwrap(), scenarios).is_err());
}
