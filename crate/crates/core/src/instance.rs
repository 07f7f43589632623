//! Problem instances: agents, items, the picking sequence, every agent's
//! ranking and the manipulator's additive utilities.
//!
//! Agent 0 is always the manipulator. Items and agents are referred to by
//! dense 0-based indices; the names only matter for I/O.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::ItemSet;

/// Index of the manipulating agent.
pub const MANIPULATOR: usize = 0;

/// On-disk form of an instance. Field order is the canonical JSON order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub items: Vec<String>,
    pub agents: Vec<String>,
    pub sequence: Vec<usize>,
    pub profile: Vec<Vec<usize>>,
    pub utilities: Vec<u64>,
}

/// A validated instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    raw: RawInstance,
    /// `position[a][i]` is the 0-based position of item `i` in agent `a`'s row.
    position: Vec<Vec<usize>>,
    picks: Vec<usize>,
    total_utility: u64,
}

impl Instance {
    pub fn new(
        items: Vec<String>,
        agents: Vec<String>,
        sequence: Vec<usize>,
        profile: Vec<Vec<usize>>,
        utilities: Vec<u64>,
    ) -> Result<Self> {
        validate(RawInstance {
            items,
            agents,
            sequence,
            profile,
            utilities,
        })
    }

    /// Builds an instance with generated names `i1..im` and `a1..an`.
    pub fn from_indices(
        sequence: Vec<usize>,
        profile: Vec<Vec<usize>>,
        utilities: Vec<u64>,
    ) -> Result<Self> {
        let m = utilities.len();
        let n = profile.len();
        Self::new(
            (1..=m).map(|i| format!("i{i}")).collect(),
            (1..=n).map(|a| format!("a{a}")).collect(),
            sequence,
            profile,
            utilities,
        )
    }

    pub fn num_items(&self) -> usize {
        self.raw.items.len()
    }

    pub fn num_agents(&self) -> usize {
        self.raw.agents.len()
    }

    pub fn item_names(&self) -> &[String] {
        &self.raw.items
    }

    pub fn agent_names(&self) -> &[String] {
        &self.raw.agents
    }

    pub fn sequence(&self) -> &[usize] {
        &self.raw.sequence
    }

    /// Picker at 0-based step `t`.
    #[inline]
    pub fn picker(&self, t: usize) -> usize {
        self.raw.sequence[t]
    }

    pub fn profile(&self) -> &[Vec<usize>] {
        &self.raw.profile
    }

    /// Agent `a`'s ranking, best item first.
    #[inline]
    pub fn ranking(&self, agent: usize) -> &[usize] {
        &self.raw.profile[agent]
    }

    /// The manipulator's truthful ranking.
    pub fn truthful_ranking(&self) -> &[usize] {
        &self.raw.profile[MANIPULATOR]
    }

    pub fn utilities(&self) -> &[u64] {
        &self.raw.utilities
    }

    #[inline]
    pub fn utility(&self, item: usize) -> u64 {
        self.raw.utilities[item]
    }

    pub fn total_utility(&self) -> u64 {
        self.total_utility
    }

    /// Sum of utilities of a set of items. Cannot overflow: bounded by the total.
    pub fn bundle_utility(&self, items: impl IntoIterator<Item = usize>) -> u64 {
        items.into_iter().map(|i| self.raw.utilities[i]).sum()
    }

    /// 0-based position of `item` in `agent`'s ranking (rank minus one).
    #[inline]
    pub fn position(&self, agent: usize, item: usize) -> usize {
        self.position[agent][item]
    }

    /// Number of picks of each agent in the sequence.
    pub fn picks(&self) -> &[usize] {
        &self.picks
    }

    pub fn manipulator_picks(&self) -> usize {
        self.picks[MANIPULATOR]
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.raw.items.iter().position(|n| n == name)
    }

    /// Agent `a`'s most preferred item outside `taken`, if any.
    #[inline]
    pub fn best_outside(&self, agent: usize, taken: &ItemSet) -> Option<usize> {
        self.raw.profile[agent]
            .iter()
            .copied()
            .find(|&i| !taken.contains(i))
    }

    /// Canonical JSON, fields in fixed order, single line.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.raw).expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text)?;
        validate(raw)
    }

    pub fn raw(&self) -> &RawInstance {
        &self.raw
    }
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        validate(raw)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        inst.raw
    }
}

/// Checks every structural invariant and returns the validated instance.
pub fn validate(raw: RawInstance) -> Result<Instance> {
    let m = raw.items.len();
    let n = raw.agents.len();
    if m == 0 || n == 0 {
        return Err(Error::EmptyInstance);
    }
    if raw.sequence.len() != m {
        return Err(Error::LengthMismatch {
            what: "sequence",
            expected: m,
            found: raw.sequence.len(),
        });
    }
    if raw.profile.len() != n {
        return Err(Error::LengthMismatch {
            what: "profile",
            expected: n,
            found: raw.profile.len(),
        });
    }
    if raw.utilities.len() != m {
        return Err(Error::LengthMismatch {
            what: "utilities",
            expected: m,
            found: raw.utilities.len(),
        });
    }
    let mut picks = vec![0usize; n];
    for (step, &a) in raw.sequence.iter().enumerate() {
        if a >= n {
            return Err(Error::InvalidAgentIndex {
                step: step + 1,
                agent: a,
                agents: n,
            });
        }
        picks[a] += 1;
    }
    let mut position = Vec::with_capacity(n);
    for (agent, row) in raw.profile.iter().enumerate() {
        position.push(inverse_permutation(row, m).ok_or(Error::NotPermutation { agent })?);
    }
    for pair in raw.profile[MANIPULATOR].windows(2) {
        if raw.utilities[pair[0]] <= raw.utilities[pair[1]] {
            return Err(Error::NonStrictUtilities {
                better: pair[0],
                worse: pair[1],
            });
        }
    }
    let total_utility = raw
        .utilities
        .iter()
        .try_fold(0u64, |acc, &u| acc.checked_add(u))
        .ok_or(Error::UtilityOverflow)?;
    Ok(Instance {
        raw,
        position,
        picks,
        total_utility,
    })
}

/// Inverse of `row` if it is a permutation of `0..m`.
pub(crate) fn inverse_permutation(row: &[usize], m: usize) -> Option<Vec<usize>> {
    if row.len() != m {
        return None;
    }
    let mut inv = vec![usize::MAX; m];
    for (pos, &item) in row.iter().enumerate() {
        if item >= m || inv[item] != usize::MAX {
            return None;
        }
        inv[item] = pos;
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_raw() -> RawInstance {
        RawInstance {
            items: vec!["i1".into(), "i2".into(), "i3".into(), "i4".into()],
            agents: vec!["a1".into(), "a2".into(), "a3".into()],
            sequence: vec![0, 1, 2, 0],
            profile: vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1], vec![0, 1, 2, 3]],
            utilities: vec![5, 4, 3, 1],
        }
    }

    #[test]
    fn example_is_valid() {
        let inst = validate(example_raw()).unwrap();
        assert_eq!(inst.num_items(), 4);
        assert_eq!(inst.manipulator_picks(), 2);
        assert_eq!(inst.position(1, 0), 2);
    }

    #[test]
    fn tied_utilities_rejected() {
        let mut raw = example_raw();
        raw.utilities = vec![5, 4, 4, 1];
        assert_eq!(
            validate(raw),
            Err(Error::NonStrictUtilities {
                better: 1,
                worse: 2
            })
        );
    }

    #[test]
    fn short_sequence_rejected() {
        let mut raw = example_raw();
        raw.sequence = vec![0, 1, 2];
        assert!(matches!(
            validate(raw),
            Err(Error::LengthMismatch {
                what: "sequence",
                ..
            })
        ));
    }

    #[test]
    fn bad_rows_and_agents_rejected() {
        let mut raw = example_raw();
        raw.profile[2] = vec![0, 0, 2, 3];
        assert_eq!(validate(raw), Err(Error::NotPermutation { agent: 2 }));

        let mut raw = example_raw();
        raw.sequence[3] = 7;
        assert!(matches!(
            validate(raw),
            Err(Error::InvalidAgentIndex { step: 4, .. })
        ));

        let mut raw = example_raw();
        raw.items.clear();
        assert_eq!(validate(raw), Err(Error::EmptyInstance));
    }

    #[test]
    fn overflow_rejected() {
        let raw = RawInstance {
            items: vec!["x".into(), "y".into()],
            agents: vec!["a".into()],
            sequence: vec![0, 0],
            profile: vec![vec![0, 1]],
            utilities: vec![u64::MAX, u64::MAX - 1],
        };
        assert_eq!(validate(raw), Err(Error::UtilityOverflow));
    }

    #[test]
    fn json_field_order_is_canonical() {
        let inst = validate(example_raw()).unwrap();
        let text = inst.to_json();
        assert_eq!(
            text,
            r#"{"items":["i1","i2","i3","i4"],"agents":["a1","a2","a3"],"sequence":[0,1,2,0],"profile":[[0,1,2,3],[2,3,0,1],[0,1,2,3]],"utilities":[5,4,3,1]}"#
        );
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn serde_goes_through_validation() {
        let bad = r#"{"items":["x"],"agents":["a"],"sequence":[0],"profile":[[1]],"utilities":[1]}"#;
        assert!(serde_json::from_str::<Instance>(bad).is_err());
    }
}
