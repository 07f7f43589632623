//! Two ways of keying the taken-item set `S` of a state.
//!
//! Every reachable `S` is the union of the non-manipulators' "already
//! passed" prefixes, so it is determined by where each non-manipulator's
//! best remaining item sits in her row. The item encoding stores the bit
//! vector; the agent encoding stores those `n - 1` row positions.

use std::hash::Hash;

use crate::instance::Instance;
use crate::itemset::ItemSet;

pub(crate) trait SetEncoding: Sync {
    type Key: Clone + Eq + Hash + Send + Sync;

    fn root(&self) -> Self::Key;

    /// Non-manipulator `picker` takes her best item outside `S`.
    /// Returns that item and the key of `S + item`.
    fn advance(&self, key: &Self::Key, picker: usize) -> (usize, Self::Key);

    fn decode(&self, key: &Self::Key) -> ItemSet;
}

pub(crate) struct ItemEncoding<'a> {
    pub instance: &'a Instance,
}

impl SetEncoding for ItemEncoding<'_> {
    type Key = ItemSet;

    fn root(&self) -> ItemSet {
        ItemSet::empty(self.instance.num_items())
    }

    fn advance(&self, key: &ItemSet, picker: usize) -> (usize, ItemSet) {
        let b = self
            .instance
            .best_outside(picker, key)
            .expect("a non-terminal state always leaves an item");
        (b, key.with(b))
    }

    fn decode(&self, key: &ItemSet) -> ItemSet {
        key.clone()
    }
}

/// Positions are stored for agents `1..n` in order; `m` marks an exhausted row.
pub(crate) struct AgentEncoding<'a> {
    pub instance: &'a Instance,
}

impl AgentEncoding<'_> {
    /// Is `item` in the set described by `tops`?
    #[inline]
    fn in_set(&self, tops: &[u32], item: usize) -> bool {
        tops.iter()
            .enumerate()
            .any(|(j, &p)| self.instance.position(j + 1, item) < p as usize)
    }
}

impl SetEncoding for AgentEncoding<'_> {
    type Key = Vec<u32>;

    fn root(&self) -> Vec<u32> {
        vec![0; self.instance.num_agents() - 1]
    }

    fn advance(&self, tops: &Vec<u32>, picker: usize) -> (usize, Vec<u32>) {
        let m = self.instance.num_items();
        let b = self.instance.ranking(picker)[tops[picker - 1] as usize];
        let next = (1..self.instance.num_agents())
            .map(|a| {
                let row = self.instance.ranking(a);
                let mut p = tops[a - 1] as usize;
                while p < m && (row[p] == b || self.in_set(tops, row[p])) {
                    p += 1;
                }
                p as u32
            })
            .collect();
        (b, next)
    }

    fn decode(&self, tops: &Vec<u32>) -> ItemSet {
        let mut s = ItemSet::empty(self.instance.num_items());
        for (j, &p) in tops.iter().enumerate() {
            for &i in &self.instance.ranking(j + 1)[..p as usize] {
                s.insert(i);
            }
        }
        s
    }
}
