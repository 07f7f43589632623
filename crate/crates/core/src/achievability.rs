//! Which item sets can the manipulator guarantee herself, and the two
//! enumeration solvers built on top of that question.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, MANIPULATOR};
use crate::itemset::ItemSet;
use crate::result::{ManipulationResult, SearchStats, SolverStats};
use crate::simulate::simulate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AchievabilityFailure {
    /// More targets than manipulator turns.
    TooLarge { target: usize, picks: usize },
    /// `item` is taken by someone else before the manipulator can reach it.
    Lost { item: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AchievabilityCertificate {
    pub achievable: bool,
    /// Witness ranking: targets in `pick_order`, then the rest truthfully.
    pub ranking: Option<Vec<usize>>,
    /// Order in which the manipulator secures the targets.
    pub pick_order: Vec<usize>,
    pub failure: Option<AchievabilityFailure>,
}

impl AchievabilityCertificate {
    fn success(instance: &Instance, order: Vec<usize>) -> Self {
        AchievabilityCertificate {
            achievable: true,
            ranking: Some(ranking_from_order(instance, &order)),
            pick_order: order,
            failure: None,
        }
    }

    fn failure(order: Vec<usize>, why: AchievabilityFailure) -> Self {
        AchievabilityCertificate {
            achievable: false,
            ranking: None,
            pick_order: order,
            failure: Some(why),
        }
    }
}

fn ranking_from_order(instance: &Instance, order: &[usize]) -> Vec<usize> {
    let head = ItemSet::from_items(instance.num_items(), order.iter().copied());
    order
        .iter()
        .copied()
        .chain(
            instance
                .truthful_ranking()
                .iter()
                .copied()
                .filter(|&i| !head.contains(i)),
        )
        .collect()
}

/// Step (0-based) at which each item would first be taken if, from step
/// `from` on, the manipulator took nothing.
fn deadlines(instance: &Instance, taken: &ItemSet, from: usize) -> Vec<Option<usize>> {
    let mut gone = taken.clone();
    let mut when = vec![None; instance.num_items()];
    for t in from..instance.num_items() {
        let a = instance.picker(t);
        if a == MANIPULATOR {
            continue;
        }
        let Some(b) = instance.best_outside(a, &gone) else {
            break;
        };
        gone.insert(b);
        when[b] = Some(t);
    }
    when
}

/// Decides whether some ranking gives the manipulator every item of
/// `target`.
///
/// At each of her turns she takes the unsecured target that the other
/// agents would remove first, ties going to her truthful preference.
pub fn is_achievable(instance: &Instance, target: &ItemSet) -> AchievabilityCertificate {
    let mu = instance.manipulator_picks();
    if target.len() > mu {
        return AchievabilityCertificate::failure(
            Vec::new(),
            AchievabilityFailure::TooLarge {
                target: target.len(),
                picks: mu,
            },
        );
    }
    let m = instance.num_items();
    let mut taken = ItemSet::empty(m);
    let mut remaining = target.clone();
    let mut order = Vec::with_capacity(target.len());
    for t in 0..m {
        if remaining.is_empty() {
            break;
        }
        let a = instance.picker(t);
        if a != MANIPULATOR {
            let b = instance
                .best_outside(a, &taken)
                .expect("an item remains at every step");
            if remaining.contains(b) {
                return AchievabilityCertificate::failure(order, AchievabilityFailure::Lost { item: b });
            }
            taken.insert(b);
            continue;
        }
        let due = deadlines(instance, &taken, t + 1);
        let pick = remaining
            .iter()
            .min_by_key(|&i| (due[i].unwrap_or(usize::MAX), instance.position(MANIPULATOR, i)))
            .expect("remaining is not empty");
        remaining.remove(pick);
        taken.insert(pick);
        order.push(pick);
    }
    AchievabilityCertificate::success(instance, order)
}

/// Reference decision procedure: try every order of the targets as the
/// head of the reported ranking. Refuses when `|target|!` exceeds `limit`.
pub fn is_achievable_oracle(
    instance: &Instance,
    target: &ItemSet,
    limit: u128,
) -> Result<AchievabilityCertificate> {
    let mu = instance.manipulator_picks();
    if target.len() > mu {
        return Ok(AchievabilityCertificate::failure(
            Vec::new(),
            AchievabilityFailure::TooLarge {
                target: target.len(),
                picks: mu,
            },
        ));
    }
    let orders = factorial(target.len());
    if orders > limit {
        return Err(Error::LimitExceeded {
            what: "orders of the target set",
            required: orders,
            limit,
        });
    }
    let mut order = target.to_vec();
    let item = loop {
        let ranking = ranking_from_order(instance, &order);
        let alloc = simulate(instance, &ranking)?;
        let got = ItemSet::from_items(instance.num_items(), alloc.manipulator_bundle().iter().copied());
        match target.iter().find(|&i| !got.contains(i)) {
            None => return Ok(AchievabilityCertificate::success(instance, order)),
            Some(i) if !next_permutation(&mut order) => break i,
            Some(_) => {}
        }
    };
    Ok(AchievabilityCertificate::failure(
        Vec::new(),
        AchievabilityFailure::Lost { item },
    ))
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x)).unwrap_or(u128::MAX)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Lexicographic successor; false once `xs` is the last permutation.
pub(crate) fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).expect("pivot has a successor");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Advances a sorted `k`-subset of `0..m` to its colex successor.
fn next_colex(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for j in 0..k {
        let cap = if j + 1 < k { c[j + 1] } else { m };
        if c[j] + 1 < cap {
            c[j] += 1;
            for (i, x) in c[..j].iter_mut().enumerate() {
                *x = i;
            }
            return true;
        }
    }
    false
}

fn search_result(
    algorithm: &'static str,
    instance: &Instance,
    ranking: Vec<usize>,
    explored: u64,
    start: Instant,
) -> Result<ManipulationResult> {
    let alloc = simulate(instance, &ranking)?;
    let bundle = alloc.manipulator_bundle().to_vec();
    Ok(ManipulationResult {
        algorithm,
        optimal_utility: instance.bundle_utility(bundle.iter().copied()),
        ranking,
        bundle,
        stats: SolverStats::Search(SearchStats {
            explored,
            elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
        }),
    })
}

/// Best achievable set of exactly `mu(a1)` items, found by walking all
/// such sets in colex order. Among equal values the lexicographically
/// smallest set wins.
pub fn solve_subset_enum(instance: &Instance, budget: u128) -> Result<ManipulationResult> {
    let start = Instant::now();
    let m = instance.num_items();
    let mu = instance.manipulator_picks();
    let count = binomial(m, mu);
    if count > budget {
        return Err(Error::LimitExceeded {
            what: "candidate bundles",
            required: count,
            limit: budget,
        });
    }
    let mut comb: Vec<usize> = (0..mu).collect();
    let mut best: Option<(u64, Vec<usize>, Vec<usize>)> = None;
    let mut explored = 0u64;
    loop {
        explored += 1;
        let value = instance.bundle_utility(comb.iter().copied());
        let worth_checking = match &best {
            None => true,
            Some((v, set, _)) => value > *v || (value == *v && comb < *set),
        };
        if worth_checking {
            let cert = is_achievable(instance, &ItemSet::from_items(m, comb.iter().copied()));
            if let Some(ranking) = cert.ranking {
                best = Some((value, comb.clone(), ranking));
            }
        }
        if !next_colex(&mut comb, m) {
            break;
        }
    }
    let (_, _, ranking) = best.expect("the truthful bundle is always achievable");
    search_result("subset", instance, ranking, explored, start)
}

/// Exhaustive search over all `m!` reported rankings, in lexicographic
/// order; the first ranking reaching the maximum is returned.
pub fn solve_bruteforce_rankings(instance: &Instance, max_items: usize) -> Result<ManipulationResult> {
    let start = Instant::now();
    let m = instance.num_items();
    if m > max_items {
        return Err(Error::LimitExceeded {
            what: "items for ranking enumeration",
            required: m as u128,
            limit: max_items as u128,
        });
    }
    let mut ranking: Vec<usize> = (0..m).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut explored = 0u64;
    loop {
        explored += 1;
        let alloc = simulate(instance, &ranking)?;
        let value = instance.bundle_utility(alloc.manipulator_bundle().iter().copied());
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, ranking.clone()));
        }
        if !next_permutation(&mut ranking) {
            break;
        }
    }
    let (_, ranking) = best.expect("at least one ranking");
    search_result("brute", instance, ranking, explored, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{four_item_example, gen_random, generate, RandomSpec, SplitMix64};
    use crate::simulate::truthful_utility;
    use proptest::prelude::*;

    fn set(m: usize, items: &[usize]) -> ItemSet {
        ItemSet::from_items(m, items.iter().copied())
    }

    /// Exhaustive: does any of the m! rankings give a bundle containing `target`?
    fn any_ranking_secures(instance: &Instance, target: &ItemSet) -> bool {
        let mut r: Vec<usize> = (0..instance.num_items()).collect();
        loop {
            let b = simulate(instance, &r).unwrap();
            if target.iter().all(|i| b.manipulator_bundle().contains(&i)) {
                return true;
            }
            if !next_permutation(&mut r) {
                return false;
            }
        }
    }

    #[test]
    fn worked_example_targets() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let c = is_achievable(&inst, &set(4, &[1, 2]));
        assert!(c.achievable);
        assert_eq!(c.pick_order, vec![2, 1]);
        assert_eq!(&c.ranking.as_ref().unwrap()[..2], &[2, 1]);
        let o = is_achievable_oracle(&inst, &set(4, &[1, 2]), 40320).unwrap();
        assert_eq!(o.pick_order, vec![2, 1]);

        assert!(!any_ranking_secures(&inst, &set(4, &[0, 1])));
        assert!(!is_achievable(&inst, &set(4, &[0, 1])).achievable);
        assert!(!is_achievable_oracle(&inst, &set(4, &[0, 1]), 40320).unwrap().achievable);

        let empty = is_achievable(&inst, &ItemSet::empty(4));
        assert!(empty.achievable);
        assert_eq!(empty.ranking.unwrap(), inst.truthful_ranking());

        let big = set(4, &[0, 1, 3]);
        assert_eq!(
            is_achievable(&inst, &big).failure,
            Some(AchievabilityFailure::TooLarge { target: 3, picks: 2 })
        );
        assert!(!is_achievable_oracle(&inst, &big, 40320).unwrap().achievable);
    }

    #[test]
    fn oracle_guard() {
        let spec = RandomSpec { manipulator_picks: Some(4), ..RandomSpec::new(2, 10) };
        let inst = generate(3, &spec).unwrap();
        let t = ItemSet::from_items(10, 0..4);
        assert!(matches!(
            is_achievable_oracle(&inst, &t, 23),
            Err(Error::LimitExceeded { required: 24, .. })
        ));
        assert!(is_achievable_oracle(&inst, &t, 24).is_ok());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(factorial(8), 40320);
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_colex(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        let mut p = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn enumeration_solvers_on_worked_example() {
        let inst = four_item_example([5, 4, 3, 1]).unwrap();
        let s = solve_subset_enum(&inst, 1000).unwrap();
        assert_eq!(s.optimal_utility, 7);
        assert_eq!(s.bundle, vec![1, 2]);
        assert_eq!(s.stats, SolverStats::Search(SearchStats { explored: 6, elapsed_ms: s.stats.elapsed_ms() }));
        assert_eq!(solve_bruteforce_rankings(&inst, 8).unwrap().optimal_utility, 7);

        let tight = four_item_example([1000, 999, 998, 0]).unwrap();
        assert_eq!(solve_subset_enum(&tight, 1000).unwrap().optimal_utility, 1997);
        assert_eq!(solve_bruteforce_rankings(&tight, 8).unwrap().optimal_utility, 1997);
        assert!(solve_subset_enum(&tight, 5).is_err());
        assert!(solve_bruteforce_rankings(&gen_random(1, 2, 9).unwrap(), 8).is_err());
    }

    #[test]
    fn degenerate_pick_counts() {
        let all = Instance::from_indices(vec![0, 0, 0], vec![vec![2, 0, 1]], vec![2, 1, 3]).unwrap();
        assert_eq!(solve_subset_enum(&all, 10).unwrap().optimal_utility, 6);
        let one = Instance::from_indices(vec![0], vec![vec![0]], vec![9]).unwrap();
        assert_eq!(solve_bruteforce_rankings(&one, 8).unwrap().optimal_utility, 9);
        let none = Instance::from_indices(vec![1], vec![vec![0], vec![0]], vec![9]).unwrap();
        assert_eq!(solve_bruteforce_rankings(&none, 8).unwrap().optimal_utility, 0);
        assert_eq!(solve_subset_enum(&none, 10).unwrap().optimal_utility, 0);
    }

    proptest! {
        #[test]
        fn greedy_matches_oracle(seed in any::<u64>(), n in 2usize..5, m in 1usize..9, tseed in any::<u64>()) {
            let inst = gen_random(seed, n, m).unwrap();
            let mut rng = SplitMix64::keyed(tseed, "target");
            let size = rng.below(inst.manipulator_picks().min(5) + 1);
            let target = ItemSet::from_items(m, rng.permutation(m).into_iter().take(size));
            let fast = is_achievable(&inst, &target);
            let slow = is_achievable_oracle(&inst, &target, 40320).unwrap();
            prop_assert_eq!(fast.achievable, slow.achievable);
            if let Some(r) = &fast.ranking {
                let got = simulate(&inst, r).unwrap();
                prop_assert!(target.iter().all(|i| got.manipulator_bundle().contains(&i)));
            }
        }

        #[test]
        fn subsets_of_achievable_sets_are_achievable(seed in any::<u64>(), m in 2usize..9, drop in any::<u64>()) {
            let spec = RandomSpec { manipulator_picks: Some(m / 2), ..RandomSpec::new(3, m) };
            let inst = generate(seed, &spec).unwrap();
            let best = solve_subset_enum(&inst, 10_000).unwrap();
            let full = ItemSet::from_items(m, best.bundle.iter().copied());
            prop_assert!(is_achievable(&inst, &full).achievable);
            let mut rng = SplitMix64::keyed(drop, "drop");
            let keep = rng.below(full.len() + 1);
            let sub = ItemSet::from_items(m, rng.permutation(full.len()).into_iter().take(keep).map(|j| best.bundle[j]));
            prop_assert!(is_achievable(&inst, &sub).achievable);
        }

        #[test]
        fn enumeration_solvers_agree(seed in any::<u64>(), n in 1usize..5, m in 1usize..7) {
            let inst = gen_random(seed, n, m).unwrap();
            let brute = solve_bruteforce_rankings(&inst, 8).unwrap();
            let subset = solve_subset_enum(&inst, 10_000).unwrap();
            prop_assert_eq!(brute.optimal_utility, subset.optimal_utility);
            prop_assert!(brute.optimal_utility >= truthful_utility(&inst));
        }
    }
}
