//! Greedy sequential allocation and per-profile statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{inverse_permutation, Instance, MANIPULATOR};
use crate::itemset::ItemSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pick {
    /// 1-based time step.
    pub step: usize,
    pub agent: usize,
    pub item: usize,
}

/// Outcome of running the picking sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    /// Per agent, the items received in increasing index order.
    pub bundles: Vec<Vec<usize>>,
    pub pick_log: Vec<Pick>,
}

impl Allocation {
    pub fn manipulator_bundle(&self) -> &[usize] {
        &self.bundles[MANIPULATOR]
    }

    /// Items in the order the manipulator picked them.
    pub fn manipulator_pick_order(&self) -> Vec<usize> {
        self.pick_log
            .iter()
            .filter(|p| p.agent == MANIPULATOR)
            .map(|p| p.item)
            .collect()
    }
}

/// Runs the protocol with `reported` in place of the manipulator's row.
pub fn simulate(instance: &Instance, reported: &[usize]) -> Result<Allocation> {
    let m = instance.num_items();
    if inverse_permutation(reported, m).is_none() {
        return Err(Error::RankingNotPermutation);
    }
    Ok(run(instance, reported))
}

/// Simulation with the truthful ranking.
pub fn simulate_truthful(instance: &Instance) -> Allocation {
    run(instance, instance.truthful_ranking())
}

fn run(instance: &Instance, reported: &[usize]) -> Allocation {
    let m = instance.num_items();
    let n = instance.num_agents();
    let mut taken = ItemSet::empty(m);
    // Rows are scanned monotonically: an item skipped once stays taken.
    let mut cursor = vec![0usize; n];
    let mut bundles = vec![Vec::new(); n];
    let mut pick_log = Vec::with_capacity(m);
    for t in 0..m {
        let agent = instance.picker(t);
        let row = if agent == MANIPULATOR {
            reported
        } else {
            instance.ranking(agent)
        };
        let c = &mut cursor[agent];
        while taken.contains(row[*c]) {
            *c += 1;
        }
        let item = row[*c];
        taken.insert(item);
        bundles[agent].push(item);
        pick_log.push(Pick {
            step: t + 1,
            agent,
            item,
        });
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    Allocation { bundles, pick_log }
}

/// The manipulator's utility when reporting truthfully.
pub fn truthful_utility(instance: &Instance) -> u64 {
    let alloc = simulate_truthful(instance);
    instance.bundle_utility(alloc.manipulator_bundle().iter().copied())
}

/// `agent`'s preferred item outside `taken`.
pub fn best_available(instance: &Instance, agent: usize, taken: &ItemSet) -> Result<usize> {
    if agent >= instance.num_agents() {
        return Err(Error::UnknownAgent(agent));
    }
    instance
        .best_outside(agent, taken)
        .ok_or(Error::NoItemAvailable)
}

/// Items `agent` strictly prefers to `item`.
pub fn preferred_to(instance: &Instance, agent: usize, item: usize) -> ItemSet {
    let row = instance.ranking(agent);
    let pos = instance.position(agent, item);
    ItemSet::from_items(instance.num_items(), row[..pos].iter().copied())
}

/// Ranks, ranges and pick counts of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileMetrics {
    /// `rank[a][i]` in `1..=m`.
    pub rank: Vec<Vec<usize>>,
    /// Per item range over the non-manipulators; `None` when `n = 1`.
    pub range: Option<Vec<usize>>,
    pub range_max: Option<usize>,
    pub mu: Vec<usize>,
    /// `mu_prefix[a][t]`: picks of `a` among the first `t` steps, `t` in `0..=m`.
    pub mu_prefix: Vec<Vec<usize>>,
}

impl ProfileMetrics {
    pub fn mu_max(&self) -> usize {
        self.mu.iter().copied().max().unwrap_or(0)
    }

    pub fn require_range_max(&self) -> Result<usize> {
        self.range_max.ok_or(Error::RangeUndefined)
    }
}

pub fn profile_metrics(instance: &Instance) -> ProfileMetrics {
    let m = instance.num_items();
    let n = instance.num_agents();
    let rank: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..m).map(|i| instance.position(a, i) + 1).collect())
        .collect();
    let range = (n >= 2).then(|| {
        (0..m)
            .map(|i| {
                let ranks = rank[1..].iter().map(|r| r[i]);
                let hi = ranks.clone().max().unwrap();
                let lo = ranks.min().unwrap();
                hi - lo + 1
            })
            .collect::<Vec<_>>()
    });
    let range_max = range.as_ref().map(|r| r.iter().copied().max().unwrap());
    let mut mu_prefix = vec![vec![0usize; m + 1]; n];
    for t in 0..m {
        for (a, prefix) in mu_prefix.iter_mut().enumerate() {
            prefix[t + 1] = prefix[t] + (instance.picker(t) == a) as usize;
        }
    }
    ProfileMetrics {
        rank,
        range,
        range_max,
        mu: instance.picks().to_vec(),
        mu_prefix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::four_item_example;
    use proptest::prelude::*;

    #[test]
    fn truthful_run_matches_worked_example() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let alloc = simulate_truthful(&inst);
        assert_eq!(alloc.bundles, vec![vec![0, 3], vec![2], vec![1]]);
        assert_eq!(truthful_utility(&inst), 6);
    }

    #[test]
    fn manipulated_run_obtains_i2_i3() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let alloc = simulate(&inst, &[2, 1, 0, 3]).unwrap();
        assert_eq!(alloc.manipulator_bundle(), &[1, 2]);
        assert_eq!(alloc.manipulator_pick_order(), vec![2, 1]);
    }

    #[test]
    fn bad_ranking_rejected() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        assert_eq!(
            simulate(&inst, &[0, 1, 2]),
            Err(Error::RankingNotPermutation)
        );
        assert_eq!(
            simulate(&inst, &[0, 1, 1, 3]),
            Err(Error::RankingNotPermutation)
        );
    }

    #[test]
    fn single_agent_takes_everything() {
        let inst = Instance::from_indices(vec![0, 0, 0], vec![vec![2, 0, 1]], vec![3, 1, 9]).unwrap();
        let alloc = simulate(&inst, &[1, 0, 2]).unwrap();
        assert_eq!(alloc.bundles[0], vec![0, 1, 2]);
        assert_eq!(truthful_utility(&inst), 13);
    }

    #[test]
    fn manipulator_without_turns_gets_nothing() {
        let inst =
            Instance::from_indices(vec![1, 1], vec![vec![0, 1], vec![1, 0]], vec![2, 1]).unwrap();
        assert_eq!(truthful_utility(&inst), 0);
    }

    #[test]
    fn best_available_follows_rows() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let none = ItemSet::empty(4);
        assert_eq!(best_available(&inst, 1, &none), Ok(2));
        assert_eq!(best_available(&inst, 1, &ItemSet::from_items(4, [2])), Ok(3));
        assert_eq!(
            best_available(&inst, 2, &ItemSet::from_items(4, [0, 2])),
            Ok(1)
        );
        assert_eq!(
            best_available(&inst, 2, &ItemSet::full(4)),
            Err(Error::NoItemAvailable)
        );
        assert_eq!(best_available(&inst, 9, &none), Err(Error::UnknownAgent(9)));
    }

    #[test]
    fn metrics_of_worked_example() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let pm = profile_metrics(&inst);
        assert_eq!(pm.mu, vec![2, 1, 1]);
        assert_eq!(pm.rank[1][0], 3);
        assert_eq!(pm.rank[2][0], 1);
        assert_eq!(pm.range.as_ref().unwrap()[0], 3);
        assert_eq!(pm.mu_prefix[0], vec![0, 1, 1, 1, 2]);
        assert_eq!(pm.mu_max(), 2);
    }

    #[test]
    fn identical_non_manipulators_have_unit_range() {
        let inst = Instance::from_indices(
            vec![0, 1, 2, 1],
            vec![vec![3, 2, 1, 0], vec![1, 0, 3, 2], vec![1, 0, 3, 2]],
            vec![1, 2, 3, 4],
        )
        .unwrap();
        assert_eq!(profile_metrics(&inst).range_max, Some(1));
    }

    #[test]
    fn range_undefined_for_one_agent() {
        let inst = Instance::from_indices(vec![0], vec![vec![0]], vec![1]).unwrap();
        let pm = profile_metrics(&inst);
        assert_eq!(pm.require_range_max(), Err(Error::RangeUndefined));
    }

    proptest! {
        #[test]
        fn allocation_invariants(seed in any::<u64>(), n in 1usize..5, m in 1usize..9, rseed in any::<u64>()) {
            let inst = crate::generators::gen_random(seed, n, m).unwrap();
            let mut rng = crate::generators::SplitMix64::keyed(rseed, "test-ranking");
            let ranking = rng.permutation(m);
            let a = simulate(&inst, &ranking).unwrap();
            let b = simulate(&inst, &ranking).unwrap();
            prop_assert_eq!(&a, &b);
            let mut seen = ItemSet::empty(m);
            for (t, p) in a.pick_log.iter().enumerate() {
                prop_assert_eq!(p.step, t + 1);
                prop_assert_eq!(p.agent, inst.picker(t));
                prop_assert!(seen.insert(p.item));
                prop_assert_eq!(seen.len(), t + 1);
            }
            let total: usize = a.bundles.iter().map(Vec::len).sum();
            prop_assert_eq!(total, m);
            for (agent, bundle) in a.bundles.iter().enumerate() {
                prop_assert_eq!(bundle.len(), inst.picks()[agent]);
            }
            let pm = profile_metrics(&inst);
            prop_assert_eq!(pm.mu.iter().sum::<usize>(), m);
            for (a, prefix) in pm.mu_prefix.iter().enumerate() {
                prop_assert!(prefix.windows(2).all(|w| w[0] <= w[1]));
                prop_assert_eq!(prefix[m], pm.mu[a]);
            }
        }

        #[test]
        fn truthful_utility_recomputes(seed in any::<u64>(), n in 1usize..5, m in 1usize..9) {
            let inst = crate::generators::gen_random(seed, n, m).unwrap();
            let alloc = simulate_truthful(&inst);
            let sum: u64 = alloc.bundles[0].iter().map(|&i| inst.utility(i)).sum();
            prop_assert_eq!(truthful_utility(&inst), sum);
        }

        #[test]
        fn best_available_is_top_outside(seed in any::<u64>(), n in 2usize..5, m in 2usize..9, mask in any::<u16>()) {
            let inst = crate::generators::gen_random(seed, n, m).unwrap();
            let taken = ItemSet::from_items(m, (0..m).filter(|i| mask >> i & 1 == 1));
            for agent in 0..n {
                match best_available(&inst, agent, &taken) {
                    Ok(b) => {
                        prop_assert!(!taken.contains(b));
                        prop_assert!(preferred_to(&inst, agent, b).is_subset(&taken));
                    }
                    Err(e) => {
                        prop_assert_eq!(e, Error::NoItemAvailable);
                        prop_assert_eq!(taken.len(), m);
                    }
                }
            }
        }
    }
}
