//! Instance encoding a multicolored-clique question in the number of agents.
//!
//! Item blocks in index order: `B_1..B_k`, `D`, then `Id_j`, `Id_jbar` for
//! each color, `Id_{j,r}` for each color pair `j < r`, and finally `Z`.
//! Agents: `a1`, `c_1..c_k`, `p_{j,r}` over ordered pairs `j != r`,
//! `cbar_1..cbar_k`, `d`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::graph::GraphInput;
use super::sidon::SidonTable;
use crate::error::{Error, Result};
use crate::instance::{Instance, MANIPULATOR};
use crate::simulate::Pick;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn contains(&self, item: usize) -> bool {
        (self.start..self.start + self.len).contains(&item)
    }
}

/// Threshold set of an `Id` block: the 1-based positions whose prefix sum
/// (in the block owner's order) is zero, excluding the final block length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauSet {
    pub block: String,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MccMetadata {
    pub k: usize,
    pub vertices: usize,
    pub sidon: SidonTable,
    pub alpha: i64,
    pub blocks: Vec<Block>,
    /// Top blocks of each agent's ranking, by agent index. Empty for `a1`.
    pub agent_blocks: Vec<Vec<String>>,
    pub tau: Vec<TauSet>,
    /// Utilities before tie-breaking and shifting; may be negative.
    pub base_utilities: Vec<i64>,
    /// `u = base * scale - (position in a1's ranking) + shift`.
    pub scale: u64,
    pub shift: u64,
}

impl MccMetadata {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn block_of(&self, item: usize) -> &Block {
        self.blocks
            .iter()
            .find(|b| b.contains(item))
            .expect("blocks cover every item")
    }

    /// Non-manipulator picks that fall outside the picker's declared blocks.
    pub fn undeclared_picks<'a>(&self, log: &'a [Pick]) -> Vec<&'a Pick> {
        log.iter()
            .filter(|p| p.agent != MANIPULATOR)
            .filter(|p| !self.agent_blocks[p.agent].contains(&self.block_of(p.item).name))
            .collect()
    }
}

/// Utilities of a block of `len` items: 1 everywhere except at the 1-based
/// positions in `thresholds` and at `len`, which make every prefix ending at
/// one of them sum to zero.
fn tau_utilities(len: usize, thresholds: &BTreeSet<u64>) -> Vec<i64> {
    let mut u = vec![1i64; len];
    let mut prev = 0i64;
    for tau in thresholds.iter().map(|&t| t as i64).chain([len as i64]) {
        u[tau as usize - 1] = prev - tau + 1;
        prev = tau;
    }
    u
}

pub fn gen_mcc_reduction(graph: &GraphInput, k: usize) -> Result<(Instance, MccMetadata)> {
    let n = graph.vertices;
    let coloring = graph.coloring.as_ref().ok_or_else(|| {
        Error::InvalidParameters("multicolored clique reduction needs a vertex coloring".into())
    })?;
    if k < 2 {
        return Err(Error::InvalidParameters(format!("need k >= 2, got {k}")));
    }
    if let Some(v) = coloring.iter().position(|&c| c == 0 || c > k) {
        return Err(Error::InvalidParameters(format!(
            "vertex {} has color {} outside 1..={k}",
            v + 1,
            coloring[v]
        )));
    }

    let sidon = SidonTable::new(n);
    let idn = sidon.max_id() as usize;
    let kk1 = k * (k + 1);

    let mut blocks = Vec::new();
    let mut push = |name: String, len: usize| {
        let start = blocks.last().map_or(0, |b: &Block| b.start + b.len);
        blocks.push(Block { name, start, len });
    };
    for j in 1..=k {
        push(format!("B{j}"), (k + 1) * idn);
    }
    push("D".into(), kk1 * idn);
    for j in 1..=k {
        push(format!("Id{j}"), idn + 2);
        push(format!("Id{j}bar"), idn + 2);
    }
    for j in 1..=k {
        for r in j + 1..=k {
            push(format!("Id{j}-{r}"), 2 * (idn + 1));
        }
    }
    push("Z".into(), 2 * kk1 * idn);
    let m = blocks.last().map_or(0, |b| b.start + b.len);
    let find = |name: &str| blocks.iter().find(|b| b.name == name).expect("known block");
    let pair_name = |j: usize, r: usize| format!("Id{}-{}", j.min(r), j.max(r));

    // Agents and their declared top blocks.
    let mut agents = vec!["a1".to_string()];
    let mut agent_blocks: Vec<Vec<String>> = vec![vec![]];
    let mut add_agent = |name: String, tops: Vec<String>| {
        agents.push(name);
        agent_blocks.push(tops);
        agents.len() - 1
    };
    let c: Vec<usize> = (1..=k)
        .map(|j| add_agent(format!("c{j}"), vec![format!("B{j}"), format!("Id{j}"), "Z".into()]))
        .collect();
    let mut p = Vec::new();
    for j in 1..=k {
        for r in (1..=k).filter(|&r| r != j) {
            p.push(add_agent(
                format!("p{j}-{r}"),
                vec![format!("B{j}"), pair_name(j, r), "Z".into()],
            ));
        }
    }
    let cbar: Vec<usize> = (1..=k)
        .map(|j| add_agent(format!("cbar{j}"), vec![format!("B{j}"), format!("Id{j}bar"), "Z".into()]))
        .collect();
    let d = add_agent("d".into(), vec!["D".into(), "Z".into()]);

    let mut items = Vec::with_capacity(m);
    for b in &blocks {
        items.extend((1..=b.len).map(|t| format!("{}_{t}", b.name)));
    }

    let mut profile = Vec::with_capacity(agents.len());
    for tops in &agent_blocks {
        let mut row: Vec<usize> = Vec::with_capacity(m);
        let mut seen = vec![false; m];
        for name in tops {
            let b = find(name);
            seen[b.start..b.start + b.len].fill(true);
            row.extend(b.start..b.start + b.len);
        }
        row.extend((0..m).filter(|&i| !seen[i]));
        profile.push(row);
    }

    let mut sequence = vec![MANIPULATOR; kk1 * idn];
    for _ in 0..idn {
        sequence.extend(&c);
        sequence.extend(&p);
        sequence.extend(&cbar);
    }
    sequence.extend(std::iter::repeat_n(d, kk1 * idn));
    sequence.resize(m, MANIPULATOR);

    // Proof-frame utilities.
    let alpha = ((idn + 2) * kk1) as i64;
    let mut base = vec![0i64; m];
    let mut tau = Vec::new();
    for j in 1..=k {
        let b = find(&format!("B{j}"));
        base[b.start] = 4 * alpha;
        base[b.start + 1..b.start + b.len].fill(2 * alpha);
    }
    let dblock = find("D");
    base[dblock.start..dblock.start + dblock.len].fill(2 * alpha);
    let mut set_tau = |name: String, values: BTreeSet<u64>| {
        let b = find(&name);
        base[b.start..b.start + b.len].copy_from_slice(&tau_utilities(b.len, &values));
        tau.push(TauSet {
            block: name,
            values: values.into_iter().collect(),
        });
    };
    for j in 1..=k {
        let ids: BTreeSet<u64> = (1..=n).filter(|&v| coloring[v - 1] == j).map(|v| sidon.id(v)).collect();
        set_tau(format!("Id{j}"), ids.clone());
        set_tau(format!("Id{j}bar"), ids);
    }
    for j in 1..=k {
        for r in j + 1..=k {
            let sums: BTreeSet<u64> = graph
                .edges
                .iter()
                .filter_map(|&(u, v)| {
                    let (cu, cv) = (coloring[u], coloring[v]);
                    ((cu, cv) == (j, r) || (cu, cv) == (r, j)).then(|| sidon.id(u + 1) + sidon.id(v + 1))
                })
                .collect();
            set_tau(pair_name(j, r), sums);
        }
    }

    // Strict integer utilities: rank items by base value (ties by index),
    // scale by m^2 and subtract the rank, then shift to nonnegative.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(base[i]), i));
    let scale = (m * m) as i128;
    let mut scaled = vec![0i128; m];
    for (pos, &i) in order.iter().enumerate() {
        scaled[i] = base[i] as i128 * scale - pos as i128;
    }
    let shift = (-scaled.iter().copied().min().unwrap_or(0)).max(0);
    let utilities = scaled
        .iter()
        .map(|&s| u64::try_from(s + shift).map_err(|_| Error::UtilityOverflow))
        .collect::<Result<Vec<u64>>>()?;
    profile[MANIPULATOR] = order;

    let inst = Instance::new(items, agents, sequence, profile, utilities)?;
    let meta = MccMetadata {
        k,
        vertices: n,
        sidon,
        alpha,
        blocks,
        agent_blocks,
        tau,
        base_utilities: base,
        scale: scale as u64,
        shift: u64::try_from(shift).map_err(|_| Error::UtilityOverflow)?,
    };
    Ok((inst, meta))
}
