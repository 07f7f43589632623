use crate::instance::{Instance, MANIPULATOR};
use crate::itemset::ItemSet;
use crate::simulate::profile_metrics;

/// Picks of the instance with the manipulator deleted from the sequence,
/// everyone else truthful, in pick order.
pub fn reduced_picks(instance: &Instance) -> Vec<usize> {
    let mut taken = ItemSet::empty(instance.num_items());
    let mut picks = Vec::new();
    for &agent in instance.sequence() {
        if agent == MANIPULATOR {
            continue;
        }
        let item = instance
            .best_outside(agent, &taken)
            .expect("fewer non-manipulator turns than items");
        taken.insert(item);
        picks.push(item);
    }
    picks
}

/// `result[t]` (for `t` in `0..=m`) is a set of `t - mu(a1, t)` items gone
/// after `t` steps whatever the manipulator reports: the first that many
/// picks of the manipulator-free run.
pub fn forced_sets(instance: &Instance) -> Vec<ItemSet> {
    let m = instance.num_items();
    let picks = reduced_picks(instance);
    let prefix = &profile_metrics(instance).mu_prefix[MANIPULATOR];
    (0..=m)
        .map(|t| ItemSet::from_items(m, picks[..t - prefix[t]].iter().copied()))
        .collect()
}
