//! Upper bounds on the number of distinct taken-sets the dynamic program
//! can visit, and per-set structural checks behind them.

use serde::Serialize;

use crate::dp::StateGraph;
use crate::instance::Instance;
use crate::itemset::ItemSet;
use crate::simulate::profile_metrics;

fn pow(base: u128, exp: usize) -> u128 {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .unwrap_or(u128::MAX)
}

/// The four bounds on distinct sets, saturating at `u128::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateBounds {
    /// `m^(n-1)`.
    pub m_pow: u128,
    /// `m (mu(a1) + 1)^(n-1)`.
    pub mu: u128,
    /// `m (2 rg_max)^(n-2)`, defined for `n >= 3`.
    pub rg_n: Option<u128>,
    /// `m 2^(2 rg_max)`, defined for `n >= 2`.
    pub rg: Option<u128>,
}

impl StateBounds {
    pub fn for_instance(instance: &Instance) -> Self {
        let m = instance.num_items() as u128;
        let n = instance.num_agents();
        let mu = instance.manipulator_picks() as u128;
        let rg = profile_metrics(instance).range_max.map(|r| r as u128);
        StateBounds {
            m_pow: pow(m, n - 1),
            mu: m.saturating_mul(pow(mu + 1, n - 1)),
            rg_n: rg.filter(|_| n >= 3).map(|r| m.saturating_mul(pow(2 * r, n - 2))),
            rg: rg.map(|r| m.saturating_mul(pow(2, 2 * r as usize))),
        }
    }

    /// `(name, bound)` for every bound that applies to the instance.
    pub fn applicable(&self) -> Vec<(&'static str, u128)> {
        let mut v = vec![("m_pow", self.m_pow), ("mu", self.mu)];
        if let Some(b) = self.rg_n {
            v.push(("rg_n", b));
        }
        if let Some(b) = self.rg {
            v.push(("rg", b));
        }
        v
    }

    pub fn tightest(&self) -> u128 {
        self.applicable().into_iter().map(|(_, b)| b).min().unwrap_or(u128::MAX)
    }
}

/// Violations of the per-set properties, counted over all distinct sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub sets_checked: usize,
    /// Sets that differ from the union of the non-manipulators' "better
    /// than current best" sets.
    pub delta_violations: usize,
    /// Sets where two non-manipulators' best-remaining ranks differ by
    /// `rg_max` or more.
    pub rank_spread_violations: usize,
    /// Sets holding an item ranked past `rk(b) + 2 rg_max` by agent 1.
    pub window_violations: usize,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.delta_violations == 0 && self.rank_spread_violations == 0 && self.window_violations == 0
    }
}

/// Checks every distinct set of `graph`.
///
/// When a row is exhausted (`S` is every item) its best remaining item is
/// taken to sit at rank `m + 1`, so that everything is "better" than it.
pub fn check_lemmas(instance: &Instance, graph: &StateGraph) -> LemmaReport {
    let m = instance.num_items();
    let n = instance.num_agents();
    let rg = profile_metrics(instance).range_max;
    let mut report = LemmaReport {
        sets_checked: graph.sets.len(),
        ..LemmaReport::default()
    };
    for s in &graph.sets {
        // 0-based position of each non-manipulator's best remaining item.
        let tops: Vec<usize> = (1..n)
            .map(|a| instance.best_outside(a, s).map_or(m, |b| instance.position(a, b)))
            .collect();

        let mut union = ItemSet::empty(m);
        for (j, &p) in tops.iter().enumerate() {
            for &i in &instance.ranking(j + 1)[..p] {
                union.insert(i);
            }
        }
        if &union != s {
            report.delta_violations += 1;
        }

        let Some(rg) = rg else { continue };
        let hi = tops.iter().max().copied().unwrap_or(0);
        let lo = tops.iter().min().copied().unwrap_or(0);
        if hi - lo > rg - 1 {
            report.rank_spread_violations += 1;
        }
        let top2 = tops[0];
        let outside_window = s.iter().any(|i| {
            let p = instance.position(1, i);
            p >= top2 && !(p > top2 && p <= top2 + 2 * rg)
        });
        if outside_window {
            report.window_violations += 1;
        }
    }
    report
}
