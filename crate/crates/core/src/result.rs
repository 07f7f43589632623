use serde::Serialize;

use crate::analysis::StateBounds;
use crate::instance::Instance;

/// State-graph diagnostics of the dynamic program.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DpStats {
    pub states: usize,
    pub distinct_sets: usize,
    pub arcs: usize,
    pub bound_m_pow: u128,
    pub bound_mu: u128,
    pub bound_rg_n: Option<u128>,
    pub bound_rg: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl DpStats {
    pub fn new(states: usize, distinct_sets: usize, arcs: usize, bounds: &StateBounds) -> Self {
        DpStats {
            states,
            distinct_sets,
            arcs,
            bound_m_pow: bounds.m_pow,
            bound_mu: bounds.mu,
            bound_rg_n: bounds.rg_n,
            bound_rg: bounds.rg,
            elapsed_ms: None,
        }
    }
}

/// Counters for the enumeration-style solvers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchStats {
    /// Rankings, subsets or search nodes examined.
    pub explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SolverStats {
    Dp(DpStats),
    Search(SearchStats),
}

impl SolverStats {
    pub fn elapsed_ms(&self) -> Option<f64> {
        match self {
            SolverStats::Dp(s) => s.elapsed_ms,
            SolverStats::Search(s) => s.elapsed_ms,
        }
    }

    pub fn set_elapsed_ms(&mut self, ms: Option<f64>) {
        match self {
            SolverStats::Dp(s) => s.elapsed_ms = ms,
            SolverStats::Search(s) => s.elapsed_ms = ms,
        }
    }

    pub fn as_dp(&self) -> Option<&DpStats> {
        match self {
            SolverStats::Dp(s) => Some(s),
            SolverStats::Search(_) => None,
        }
    }
}

/// An optimal manipulation found by one of the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct ManipulationResult {
    pub algorithm: &'static str,
    pub optimal_utility: u64,
    /// Complete reported ranking, best first.
    pub ranking: Vec<usize>,
    /// Items the manipulator ends up with, increasing index order.
    pub bundle: Vec<usize>,
    pub stats: SolverStats,
}

/// JSON form of a result, items by name.
#[derive(Debug, Clone, Serialize)]
pub struct ResultReport {
    pub algorithm: String,
    pub optimal_utility: u64,
    pub truthful_utility: u64,
    pub ranking: Vec<String>,
    pub bundle: Vec<String>,
    pub stats: SolverStats,
}

impl ManipulationResult {
    pub fn report(&self, instance: &Instance, truthful_utility: u64) -> ResultReport {
        let name = |i: &usize| instance.item_names()[*i].clone();
        ResultReport {
            algorithm: self.algorithm.to_string(),
            optimal_utility: self.optimal_utility,
            truthful_utility,
            ranking: self.ranking.iter().map(name).collect(),
            bundle: self.bundle.iter().map(name).collect(),
            stats: self.stats.clone(),
        }
    }
}
