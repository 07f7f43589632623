use std::time::Instant;

use super::model::IpModel;
use crate::error::{Error, Result};
use crate::result::{ManipulationResult, SearchStats, SolverStats};

struct Search<'a> {
    model: &'a IpModel,
    m: usize,
    manip: Vec<bool>,
    /// Greedy rows grouped by step.
    greedy_at: Vec<Vec<usize>>,
    /// Items sorted by decreasing objective value.
    by_value: Vec<usize>,
    values: Vec<u64>,
    assignment: Vec<usize>,
    used: Vec<bool>,
    best: Option<(u64, Vec<usize>)>,
    nodes: u64,
}

impl Search<'_> {
    /// Greedy rows at `t` still satisfiable once `t` is assigned.
    fn greedy_ok(&self, t: usize) -> bool {
        self.greedy_at[t].iter().all(|&r| {
            let row = &self.model.greedy_rows[r];
            let lhs = row
                .terms
                .iter()
                .filter(|v| v.step <= t && self.assignment[v.step] == v.item)
                .count() as u64;
            lhs >= row.rhs
        })
    }

    fn bound(&self, t: usize, value: u64) -> u64 {
        let slots = self.manip[t..].iter().filter(|&&b| b).count();
        value
            + self
                .by_value
                .iter()
                .filter(|&&i| !self.used[i])
                .take(slots)
                .map(|&i| self.values[i])
                .sum::<u64>()
    }

    fn dfs(&mut self, t: usize, value: u64) {
        self.nodes += 1;
        if t == self.m {
            if self.best.as_ref().is_none_or(|(v, _)| value > *v) {
                self.best = Some((value, self.assignment.clone()));
            }
            return;
        }
        if let Some((v, _)) = &self.best {
            if self.bound(t, value) <= *v {
                return;
            }
        }
        let order = if self.manip[t] { self.by_value.clone() } else { (0..self.m).collect() };
        for i in order {
            if self.used[i] {
                continue;
            }
            self.assignment[t] = i;
            if !self.greedy_ok(t) {
                continue;
            }
            self.used[i] = true;
            let gain = if self.manip[t] { self.values[i] } else { 0 };
            self.dfs(t + 1, value + gain);
            self.used[i] = false;
        }
    }
}

/// Exact optimum of the integer program by depth-first search over steps.
///
/// Non-manipulator steps admit a single item satisfying their greedy rows.
/// At manipulator steps items are tried by decreasing value and a branch is
/// cut when even the best remaining items cannot beat the incumbent.
pub fn solve_naive(model: &IpModel, max_items: usize) -> Result<ManipulationResult> {
    let start = Instant::now();
    let m = model.num_items;
    if m > max_items {
        return Err(Error::LimitExceeded {
            what: "items for the naive integer program search",
            required: m as u128,
            limit: max_items as u128,
        });
    }
    let mut manip = vec![false; m];
    for t in model.manipulator_steps() {
        manip[t] = true;
    }
    let mut greedy_at = vec![Vec::new(); m];
    for (r, row) in model.greedy_rows.iter().enumerate() {
        let t = row.terms.iter().map(|v| v.step).max().unwrap_or(0);
        greedy_at[t].push(r);
    }
    let values = model.item_values().unwrap_or_else(|| vec![0; m]);
    let mut by_value: Vec<usize> = (0..m).collect();
    by_value.sort_by_key(|&i| (std::cmp::Reverse(values[i]), i));

    let mut search = Search {
        model,
        m,
        manip,
        greedy_at,
        by_value,
        values,
        assignment: vec![usize::MAX; m],
        used: vec![false; m],
        best: None,
        nodes: 0,
    };
    search.dfs(0, 0);
    let (value, assignment) = search.best.take().ok_or(Error::Infeasible)?;
    debug_assert!(model.is_feasible(&assignment));

    let mut ranking: Vec<usize> = (0..m).filter(|&t| search.manip[t]).map(|t| assignment[t]).collect();
    let mut bundle = ranking.clone();
    bundle.sort_unstable();
    ranking.extend(search.by_value.iter().copied().filter(|i| !bundle.contains(i)));

    Ok(ManipulationResult {
        algorithm: "ilp-naive",
        optimal_utility: value,
        ranking,
        bundle,
        stats: SolverStats::Search(SearchStats {
            explored: search.nodes,
            elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
        }),
    })
}
