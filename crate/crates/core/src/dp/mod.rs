//! Exact optimal manipulation by dynamic programming over states `(k, S)`.
//!
//! In state `(k, S)` the items of `S` are gone and the manipulator has
//! additionally picked `k` items whose identity is not fixed yet. The next
//! picker is `sequence[|S| + k]`:
//!
//! * the manipulator: move to `(k + 1, S)`;
//! * a non-manipulator `a` with best remaining item `b = b(a, S)`: either `b`
//!   was one of the manipulator's open picks (only if `k > 0`, gaining
//!   `u(b)`, to `(k - 1, S + b)`), or `a` takes it (to `(k, S + b)`).
//!
//! When `|S| + k = m` the open picks are exactly the items outside `S`.
//! States are generated level by level on `t = |S| + k`, and within a level
//! by decreasing `k`, which is a topological order of the graph.

mod encoding;
mod forced;

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::StateBounds;
use crate::error::{Error, Result};
use crate::instance::{Instance, MANIPULATOR};
use crate::itemset::ItemSet;
use crate::result::{DpStats, ManipulationResult, SolverStats};
use encoding::{AgentEncoding, ItemEncoding, SetEncoding};

pub use forced::{forced_sets, reduced_picks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Agent encoding when `n <= agent_threshold`, item encoding otherwise.
    #[default]
    Auto,
    Agent,
    Item,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpConfig {
    pub representation: Representation,
    pub agent_threshold: usize,
    pub max_states: usize,
    /// 0 or 1 runs single-threaded.
    pub threads: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig {
            representation: Representation::Auto,
            agent_threshold: 8,
            max_states: 20_000_000,
            threads: 1,
        }
    }
}

impl DpConfig {
    pub fn resolved_representation(&self, instance: &Instance) -> Representation {
        match self.representation {
            Representation::Auto if instance.num_agents() <= self.agent_threshold => {
                Representation::Agent
            }
            Representation::Auto => Representation::Item,
            r => r,
        }
    }
}

/// A state of the dynamic program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpState {
    pub k: usize,
    /// Index into [`StateGraph::sets`].
    pub set: usize,
    /// Picks done so far, `|S| + k`.
    pub time: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// The manipulator uses a turn on a not-yet-identified item.
    Slot,
    /// `agent`'s best item turns out to be an earlier manipulator pick.
    Claim { agent: usize, item: usize },
    /// `agent` takes her best remaining item.
    Pick { agent: usize, item: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub to: usize,
    pub kind: ArcKind,
}

/// The explored state graph with values from backward induction.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub representation: Representation,
    pub states: Vec<DpState>,
    /// Distinct taken-item sets, in discovery order.
    pub sets: Vec<ItemSet>,
    pub arcs: Vec<Vec<Arc>>,
    pub values: Vec<u64>,
    /// Index into `arcs[s]` of the chosen successor.
    pub best: Vec<Option<usize>>,
}

impl StateGraph {
    pub fn distinct_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn root_value(&self) -> u64 {
        self.values[0]
    }

    pub fn taken(&self, state: usize) -> &ItemSet {
        &self.sets[self.states[state].set]
    }

    pub fn find(&self, k: usize, taken: &ItemSet) -> Option<usize> {
        self.states
            .iter()
            .position(|s| s.k == k && &self.sets[s.set] == taken)
    }
}

struct SetInfo<K> {
    key: K,
    len: usize,
    utility: u64,
}

pub fn build_state_graph(instance: &Instance, config: &DpConfig) -> Result<StateGraph> {
    let repr = config.resolved_representation(instance);
    let run = || match repr {
        Representation::Item => build_with(instance, &ItemEncoding { instance }, config, repr),
        _ => build_with(instance, &AgentEncoding { instance }, config, repr),
    };
    if config.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidParameters(e.to_string()))?
            .install(run)
    } else {
        run()
    }
}

fn build_with<E: SetEncoding>(
    instance: &Instance,
    enc: &E,
    config: &DpConfig,
    repr: Representation,
) -> Result<StateGraph> {
    let m = instance.num_items();
    let mu = instance.manipulator_picks();
    let parallel = config.threads > 1;

    let mut sets: Vec<SetInfo<E::Key>> = Vec::new();
    let mut set_ids: HashMap<E::Key, usize> = HashMap::new();
    let mut states: Vec<DpState> = Vec::new();
    let mut state_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut arcs: Vec<Vec<Arc>> = Vec::new();
    let mut buckets: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); mu + 1]; m + 1];
    let mut order: Vec<usize> = Vec::new();

    let root = enc.root();
    set_ids.insert(root.clone(), 0);
    sets.push(SetInfo {
        key: root,
        len: 0,
        utility: 0,
    });
    states.push(DpState {
        k: 0,
        set: 0,
        time: 0,
    });
    state_ids.insert((0, 0), 0);
    arcs.push(Vec::new());
    buckets[0][0].push(0);

    for t in 0..=m {
        for k in (0..=mu).rev() {
            let ids = std::mem::take(&mut buckets[t][k]);
            order.extend_from_slice(&ids);
            if t == m {
                continue;
            }
            let picker = instance.picker(t);
            if picker == MANIPULATOR {
                for &id in &ids {
                    let set = states[id].set;
                    let to = intern_state(
                        &mut states,
                        &mut state_ids,
                        &mut arcs,
                        &mut buckets,
                        k + 1,
                        set,
                        t + 1,
                        config.max_states,
                    )?;
                    arcs[id].push(Arc {
                        to,
                        kind: ArcKind::Slot,
                    });
                }
                continue;
            }
            let advanced: Vec<(usize, E::Key)> = if parallel {
                ids.par_iter()
                    .map(|&id| enc.advance(&sets[states[id].set].key, picker))
                    .collect()
            } else {
                ids.iter()
                    .map(|&id| enc.advance(&sets[states[id].set].key, picker))
                    .collect()
            };
            for (&id, (item, key)) in ids.iter().zip(advanced) {
                let parent = states[id].set;
                let next_set = match set_ids.get(&key) {
                    Some(&s) => s,
                    None => {
                        let s = sets.len();
                        let info = SetInfo {
                            key: key.clone(),
                            len: sets[parent].len + 1,
                            utility: sets[parent].utility + instance.utility(item),
                        };
                        sets.push(info);
                        set_ids.insert(key, s);
                        s
                    }
                };
                if k > 0 {
                    let to = intern_state(
                        &mut states,
                        &mut state_ids,
                        &mut arcs,
                        &mut buckets,
                        k - 1,
                        next_set,
                        t,
                        config.max_states,
                    )?;
                    arcs[id].push(Arc {
                        to,
                        kind: ArcKind::Claim {
                            agent: picker,
                            item,
                        },
                    });
                }
                let to = intern_state(
                    &mut states,
                    &mut state_ids,
                    &mut arcs,
                    &mut buckets,
                    k,
                    next_set,
                    t + 1,
                    config.max_states,
                )?;
                arcs[id].push(Arc {
                    to,
                    kind: ArcKind::Pick {
                        agent: picker,
                        item,
                    },
                });
            }
        }
    }
    debug_assert_eq!(order.len(), states.len());

    // Backward induction in reverse generation order.
    let total = instance.total_utility();
    let mut values = vec![0u64; states.len()];
    let mut best = vec![None; states.len()];
    for &id in order.iter().rev() {
        let st = &states[id];
        if st.time == m {
            values[id] = total - sets[st.set].utility;
            continue;
        }
        let mut choice: Option<(usize, u64)> = None;
        for (ai, arc) in arcs[id].iter().enumerate() {
            let gain = match arc.kind {
                ArcKind::Claim { item, .. } => instance.utility(item),
                _ => 0,
            };
            let v = values[arc.to] + gain;
            // Strict: the claim arc comes first and wins ties.
            if choice.is_none_or(|(_, bv)| v > bv) {
                choice = Some((ai, v));
            }
        }
        let (ai, v) = choice.expect("non-terminal state has a successor");
        values[id] = v;
        best[id] = Some(ai);
    }

    Ok(StateGraph {
        representation: repr,
        states,
        sets: sets.iter().map(|s| enc.decode(&s.key)).collect(),
        arcs,
        values,
        best,
    })
}

#[allow(clippy::too_many_arguments)]
fn intern_state(
    states: &mut Vec<DpState>,
    ids: &mut HashMap<(usize, usize), usize>,
    arcs: &mut Vec<Vec<Arc>>,
    buckets: &mut [Vec<Vec<usize>>],
    k: usize,
    set: usize,
    time: usize,
    limit: usize,
) -> Result<usize> {
    if let Some(&id) = ids.get(&(k, set)) {
        return Ok(id);
    }
    if states.len() >= limit {
        return Err(Error::StateLimitExceeded { limit });
    }
    let id = states.len();
    states.push(DpState { k, set, time });
    ids.insert((k, set), id);
    arcs.push(Vec::new());
    buckets[time][k].push(id);
    Ok(id)
}

/// Follows the chosen arcs from the root and rebuilds a ranking.
///
/// Each claimed item is assigned to the earliest manipulator turn not yet
/// assigned; the items left at the terminal state fill the remaining turns
/// in truthful order. Those items, in turn order, head the ranking and the
/// rest follows truthfully.
pub fn recover_ranking(instance: &Instance, graph: &StateGraph) -> Vec<usize> {
    let mut slots: Vec<Option<usize>> = Vec::new();
    let mut next_open = 0usize;
    let mut s = 0usize;
    while let Some(ai) = graph.best[s] {
        let arc = graph.arcs[s][ai];
        match arc.kind {
            ArcKind::Slot => slots.push(None),
            ArcKind::Claim { item, .. } => {
                while slots[next_open].is_some() {
                    next_open += 1;
                }
                slots[next_open] = Some(item);
            }
            ArcKind::Pick { .. } => {}
        }
        s = arc.to;
    }
    let taken = graph.taken(s);
    let mut leftover = instance
        .truthful_ranking()
        .iter()
        .copied()
        .filter(|&i| !taken.contains(i));
    let picked: Vec<usize> = slots
        .into_iter()
        .map(|slot| slot.or_else(|| leftover.next()).expect("one item per turn"))
        .collect();
    let chosen = ItemSet::from_items(instance.num_items(), picked.iter().copied());
    picked
        .iter()
        .copied()
        .chain(
            instance
                .truthful_ranking()
                .iter()
                .copied()
                .filter(|&i| !chosen.contains(i)),
        )
        .collect()
}

/// Solves the instance and returns the explored graph alongside.
pub fn solve_dp_with_graph(
    instance: &Instance,
    config: &DpConfig,
) -> Result<(ManipulationResult, StateGraph)> {
    let start = Instant::now();
    let graph = build_state_graph(instance, config)?;
    let ranking = recover_ranking(instance, &graph);
    let mu = instance.manipulator_picks();
    let mut bundle = ranking[..mu].to_vec();
    bundle.sort_unstable();
    let bounds = StateBounds::for_instance(instance);
    let mut stats = DpStats::new(
        graph.states.len(),
        graph.distinct_sets(),
        graph.num_arcs(),
        &bounds,
    );
    stats.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    let result = ManipulationResult {
        algorithm: "dp",
        optimal_utility: graph.root_value(),
        ranking,
        bundle,
        stats: SolverStats::Dp(stats),
    };
    Ok((result, graph))
}

pub fn solve_dp(instance: &Instance, config: &DpConfig) -> Result<ManipulationResult> {
    solve_dp_with_graph(instance, config).map(|(r, _)| r)
}
