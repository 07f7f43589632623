//! The manipulation problem as a 0/1 integer program over "item `i` is
//! picked at step `t`" variables.

mod lp;
mod model;
mod naive;

pub use lp::{export_lp, parse_lp};
pub use model::{build_model, IpModel, Row, Sense, Var};
pub use naive::solve_naive;

use crate::error::Result;
use crate::instance::Instance;
use crate::result::ManipulationResult;

/// Builds the model for `instance` and solves it with [`solve_naive`].
pub fn solve_ilp_naive(instance: &Instance, max_items: usize) -> Result<ManipulationResult> {
    solve_naive(&build_model(instance), max_items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::achievability::next_permutation;
    use crate::generators::{four_item_example, gen_random, SplitMix64};
    use crate::simulate::{simulate, simulate_truthful};
    use proptest::prelude::*;

    fn schedule(alloc: &crate::simulate::Allocation) -> Vec<usize> {
        alloc.pick_log.iter().map(|p| p.item).collect()
    }

    #[test]
    fn worked_example_dimensions() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let model = build_model(&inst);
        assert_eq!(model.num_vars(), 16);
        assert_eq!(model.eq_rows.len(), 8);
        // two non-manipulator steps, four items each
        assert_eq!(model.greedy_rows.len(), 8);
        let r = model.greedy_rows.iter().find(|r| r.name == "greedy_3_2").unwrap();
        assert_eq!(r.terms, vec![Var { item: 2, step: 1 }, Var { item: 2, step: 0 }]);
    }

    #[test]
    fn single_manipulator_step() {
        let inst = Instance::from_indices(vec![0], vec![vec![0]], vec![4]).unwrap();
        let model = build_model(&inst);
        assert_eq!((model.num_vars(), model.eq_rows.len(), model.greedy_rows.len()), (1, 2, 0));
        assert_eq!(solve_naive(&model, 8).unwrap().optimal_utility, 4);
    }

    #[test]
    fn lp_text() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let text = export_lp(&build_model(&inst));
        let obj = text.lines().find(|l| l.trim_start().starts_with("obj:")).unwrap();
        assert!(obj.contains("5 x_1_1"));
        assert!(obj.contains("5 x_1_4"));
        assert!(!obj.contains("x_1_2"));
        assert!(text.contains("item_1: x_1_1 + x_1_2 + x_1_3 + x_1_4 = 1\n"));
        assert!(text.contains("greedy_3_2: x_3_2 + x_3_1 >= 1\n"));
        for section in ["Maximize\n", "Subject To\n", "Binary\n", "End\n"] {
            assert!(text.contains(section));
        }
        let again = export_lp(&parse_lp(&text).unwrap());
        assert_eq!(again, text);
    }

    #[test]
    fn long_rows_wrap_and_round_trip() {
        let inst = gen_random(11, 3, 40).unwrap();
        let text = export_lp(&build_model(&inst));
        assert!(text.lines().all(|l| l.len() <= 260));
        let parsed = parse_lp(&text).unwrap();
        assert_eq!(parsed, build_model(&inst));
        assert_eq!(export_lp(&parsed), text);
    }

    #[test]
    fn malformed_lp() {
        assert!(parse_lp("Maximize\n obj: 5 x_1_1\nSubject To\n").is_err());
        assert!(parse_lp("Maximize\n obj: 5 y\nSubject To\nBinary\n x_1_1\nEnd\n").is_err());
        assert!(parse_lp("Maximize\n obj: 5 x_1_1\nSubject To\n c: x_1_1\nBinary\n x_1_1\nEnd\n").is_err());
        assert!(parse_lp("hello\n").is_err());
    }

    #[test]
    fn naive_solver_values() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let r = solve_ilp_naive(&inst, 8).unwrap();
        assert_eq!(r.optimal_utility, 7);
        assert_eq!(simulate(&inst, &r.ranking).unwrap().manipulator_bundle(), r.bundle.as_slice());
        let tight = four_item_example([1000, 999, 998, 0]).unwrap();
        assert_eq!(solve_ilp_naive(&tight, 8).unwrap().optimal_utility, 1997);
        let solo = Instance::from_indices(vec![0, 0, 0], vec![vec![1, 2, 0]], vec![1, 3, 2]).unwrap();
        assert_eq!(solve_ilp_naive(&solo, 8).unwrap().optimal_utility, 6);
        assert!(solve_ilp_naive(&gen_random(0, 2, 9).unwrap(), 8).is_err());
    }

    #[test]
    fn feasible_points_are_greedy_runs() {
        // Every feasible 0/1 point is the schedule of some reported ranking.
        for seed in 0..20 {
            let inst = gen_random(seed, 3, 5).unwrap();
            let model = build_model(&inst);
            let mut a: Vec<usize> = (0..5).collect();
            loop {
                if model.is_feasible(&a) {
                    let mine: Vec<usize> = (0..5).filter(|&t| inst.picker(t) == 0).map(|t| a[t]).collect();
                    let mut ranking = mine.clone();
                    ranking.extend((0..5).filter(|i| !mine.contains(i)));
                    assert_eq!(schedule(&simulate(&inst, &ranking).unwrap()), a);
                }
                if !next_permutation(&mut a) {
                    break;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn simulated_schedules_are_feasible(seed in any::<u64>(), n in 1usize..5, m in 1usize..10, rseed in any::<u64>()) {
            let inst = gen_random(seed, n, m).unwrap();
            let model = build_model(&inst);
            prop_assert_eq!(model.greedy_rows.len(), m * inst.sequence().iter().filter(|&&a| a != 0).count());
            let truthful = schedule(&simulate_truthful(&inst));
            prop_assert!(model.is_feasible(&truthful));
            let ranking = SplitMix64::keyed(rseed, "ilp").permutation(m);
            let alloc = simulate(&inst, &ranking).unwrap();
            let s = schedule(&alloc);
            prop_assert!(model.is_feasible(&s));
            prop_assert_eq!(model.evaluate(&s), inst.bundle_utility(alloc.manipulator_bundle().iter().copied()));
        }
    }
}
