//! Instance whose manipulator can reach the "medium" third pick exactly when
//! the source graph has a k-clique.
//!
//! Items, in index order (which is also the manipulator's ranking):
//! `b_v` per vertex, `g_e` per edge, `m_v` per vertex, `w_e` per edge.
//! Agents: `a1`, `v_1..v_n`, one `e` agent per edge, then `|V|-k-1`
//! collectors.

use serde::Serialize;

use super::graph::GraphInput;
use crate::error::{Error, Result};
use crate::instance::{Instance, MANIPULATOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UtilityClass {
    Best,
    Good,
    Medium,
    Worst,
}

impl UtilityClass {
    pub fn weight(self) -> u64 {
        match self {
            UtilityClass::Best => 4,
            UtilityClass::Good => 3,
            UtilityClass::Medium => 2,
            UtilityClass::Worst => 1,
        }
    }
}

/// How many items of each class a bundle holds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassSignature {
    pub best: usize,
    pub good: usize,
    pub medium: usize,
    pub worst: usize,
}

impl ClassSignature {
    pub fn class_value(&self) -> u64 {
        4 * self.best as u64 + 3 * self.good as u64 + 2 * self.medium as u64 + self.worst as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueMetadata {
    pub k: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Class of every item, by item index.
    pub item_classes: Vec<UtilityClass>,
    /// Multiplier applied to class weights before subtracting the item index.
    pub scale: u64,
    /// Optimal bundle shape when the graph has a k-clique.
    pub signature_with_clique: ClassSignature,
    /// Optimal bundle shape otherwise.
    pub signature_without_clique: ClassSignature,
}

impl CliqueMetadata {
    pub fn signature(&self, bundle: &[usize]) -> ClassSignature {
        let mut s = ClassSignature::default();
        for &i in bundle {
            match self.item_classes[i] {
                UtilityClass::Best => s.best += 1,
                UtilityClass::Good => s.good += 1,
                UtilityClass::Medium => s.medium += 1,
                UtilityClass::Worst => s.worst += 1,
            }
        }
        s
    }
}

pub fn gen_clique_reduction(graph: &GraphInput, k: usize) -> Result<(Instance, CliqueMetadata)> {
    let (nv, ne) = (graph.vertices, graph.edges.len());
    let pairs = k * k.saturating_sub(1) / 2;
    if k == 0 || nv <= k || ne <= pairs {
        return Err(Error::InvalidParameters(format!(
            "clique reduction needs k >= 1, |V| > k and |E| > k(k-1)/2 (|V|={nv}, |E|={ne}, k={k})"
        )));
    }
    let m = 2 * nv + 2 * ne;
    let b = |v: usize| v;
    let g = |e: usize| nv + e;
    let mid = |v: usize| nv + ne + v;
    let w = |e: usize| 2 * nv + ne + e;

    let edge_name = |e: usize| {
        let (u, v) = graph.edges[e];
        format!("{}-{}", u + 1, v + 1)
    };
    let mut items = Vec::with_capacity(m);
    items.extend((0..nv).map(|v| format!("b{}", v + 1)));
    items.extend((0..ne).map(|e| format!("g{}", edge_name(e))));
    items.extend((0..nv).map(|v| format!("m{}", v + 1)));
    items.extend((0..ne).map(|e| format!("w{}", edge_name(e))));

    let collectors = nv - k - 1;
    let mut agents = vec!["a1".to_string()];
    agents.extend((0..nv).map(|v| format!("v{}", v + 1)));
    agents.extend((0..ne).map(|e| format!("e{}", edge_name(e))));
    agents.extend((0..collectors).map(|c| format!("c{}", c + 1)));
    let vertex_agent = |v: usize| 1 + v;
    let edge_agent = |e: usize| 1 + nv + e;
    let collector = |c: usize| 1 + nv + ne + c;

    let with_top = |top: Vec<usize>| {
        let mut row = top.clone();
        row.extend((0..m).filter(|i| !top.contains(i)));
        row
    };
    let mut profile = vec![(0..m).collect::<Vec<_>>()];
    profile.extend((0..nv).map(|v| with_top(vec![b(v), mid(v)])));
    profile.extend((0..ne).map(|e| {
        let (u, v) = graph.edges[e];
        with_top(vec![g(e), mid(u), mid(v), w(e)])
    }));
    profile.extend((0..collectors).map(|_| with_top((0..nv).map(mid).collect())));

    let mut sequence = vec![MANIPULATOR; k];
    sequence.extend((0..nv).map(vertex_agent));
    sequence.extend(std::iter::repeat_n(MANIPULATOR, pairs));
    sequence.extend((0..ne).map(edge_agent));
    sequence.extend((0..collectors).map(collector));
    sequence.push(MANIPULATOR);
    let remaining = m - sequence.len();
    sequence.extend(1..=remaining);

    let mut classes = Vec::with_capacity(m);
    classes.extend(std::iter::repeat_n(UtilityClass::Best, nv));
    classes.extend(std::iter::repeat_n(UtilityClass::Good, ne));
    classes.extend(std::iter::repeat_n(UtilityClass::Medium, nv));
    classes.extend(std::iter::repeat_n(UtilityClass::Worst, ne));
    let scale = (m * m) as u64;
    let utilities = classes
        .iter()
        .enumerate()
        .map(|(i, c)| c.weight() * scale - i as u64)
        .collect();

    let inst = Instance::new(items, agents, sequence, profile, utilities)?;
    let core = ClassSignature {
        best: k,
        good: pairs,
        ..Default::default()
    };
    let meta = CliqueMetadata {
        k,
        vertices: nv,
        edges: ne,
        item_classes: classes,
        scale,
        signature_with_clique: ClassSignature { medium: 1, ..core },
        signature_without_clique: ClassSignature { worst: 1, ..core },
    };
    Ok((inst, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::profile_metrics;

    fn house() -> GraphInput {
        // 4-cycle plus one chord: contains triangles 1-2-3 and 1-3-4.
        GraphInput::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
    }

    #[test]
    fn counts_follow_the_construction() {
        let (inst, meta) = gen_clique_reduction(&house(), 3).unwrap();
        assert_eq!(inst.num_items(), 18);
        // 2|V| + |E| - k
        assert_eq!(inst.num_agents(), 10);
        assert_eq!(inst.manipulator_picks(), 7);
        assert_eq!(profile_metrics(&inst).mu_max(), 7);
        assert_eq!(meta.signature_with_clique.class_value(), 4 * 3 + 3 * 3 + 2);
        assert_eq!(meta.signature_without_clique.class_value(), 4 * 3 + 3 * 3 + 1);
    }

    #[test]
    fn rankings_and_utilities() {
        let (inst, meta) = gen_clique_reduction(&house(), 3).unwrap();
        let name = |i: usize| inst.item_names()[i].as_str();
        let top = |a: usize, len: usize| inst.ranking(a)[..len].iter().map(|&i| name(i)).collect::<Vec<_>>();
        assert_eq!(top(1, 2), ["b1", "m1"]);
        // edge 4-1 is stored as (1, 4)
        assert_eq!(inst.agent_names()[8], "e1-4");
        assert_eq!(top(8, 4), ["g1-4", "m1", "m4", "w1-4"]);
        assert_eq!(inst.agent_names()[9], "e1-3");
        assert_eq!(top(9, 4), ["g1-3", "m1", "m3", "w1-3"]);
        assert_eq!(meta.signature(&[0, 4, 9]), ClassSignature { best: 1, good: 1, medium: 1, worst: 0 });
        assert_eq!(inst.utility(0), 4 * 324);
        assert_eq!(inst.utility(17), 324 - 17);
    }

    #[test]
    fn preconditions() {
        let g = house();
        assert!(gen_clique_reduction(&g, 4).is_err());
        assert!(gen_clique_reduction(&g, 0).is_err());
        let sparse = GraphInput::new(5, &[(0, 1), (1, 2)]).unwrap();
        assert!(gen_clique_reduction(&sparse, 3).is_err());
    }
}
