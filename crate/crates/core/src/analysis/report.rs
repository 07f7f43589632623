use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use super::bounds::{check_lemmas, LemmaReport, StateBounds};
use crate::dp::{solve_dp_with_graph, DpConfig};
use crate::error::Result;
use crate::instance::Instance;
use crate::simulate::truthful_utility;

/// Exact `u_opt / u_T`, serialized as `"num/den"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactRatio(pub Ratio<u64>);

impl ExactRatio {
    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// `u_opt < 2 u_T`, decided on integers.
    pub fn below_two(&self) -> bool {
        (self.numer() as u128) < 2 * self.denom() as u128
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioStatus {
    Holds,
    /// Truthful utility is zero, so no ratio exists.
    Vacuous,
    Violated,
}

pub fn ratio_status(optimal: u64, truthful: u64) -> (Option<ExactRatio>, RatioStatus) {
    if truthful == 0 {
        return (None, RatioStatus::Vacuous);
    }
    let r = ExactRatio(Ratio::new(optimal, truthful));
    let status = if r.below_two() { RatioStatus::Holds } else { RatioStatus::Violated };
    (Some(r), status)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateBoundCheck {
    pub name: &'static str,
    pub bound: u128,
    /// `bound - distinct_sets`; negative when violated.
    pub slack: i128,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub u_truthful: u64,
    pub u_optimal: u64,
    pub ratio: Option<ExactRatio>,
    pub ratio_status: RatioStatus,
    /// False only when `u_T > 0` and `u_opt >= 2 u_T`.
    pub bound_ok: bool,
    pub states: usize,
    pub distinct_sets: usize,
    pub state_bounds: Vec<StateBoundCheck>,
    pub state_bounds_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaReport>,
}

fn bound_checks(distinct: usize, bounds: &StateBounds) -> Vec<StateBoundCheck> {
    bounds
        .applicable()
        .into_iter()
        .map(|(name, bound)| {
            let slack = i128::try_from(bound).unwrap_or(i128::MAX) - distinct as i128;
            StateBoundCheck {
                name,
                bound,
                slack,
                holds: slack >= 0,
            }
        })
        .collect()
}

fn analyze(instance: &Instance, config: &DpConfig, lemmas: bool) -> Result<BoundReport> {
    let (result, graph) = solve_dp_with_graph(instance, config)?;
    let u_truthful = truthful_utility(instance);
    let (ratio, ratio_status) = ratio_status(result.optimal_utility, u_truthful);
    let state_bounds = bound_checks(graph.distinct_sets(), &StateBounds::for_instance(instance));
    Ok(BoundReport {
        u_truthful,
        u_optimal: result.optimal_utility,
        ratio,
        ratio_status,
        bound_ok: ratio_status != RatioStatus::Violated,
        states: graph.states.len(),
        distinct_sets: graph.distinct_sets(),
        state_bounds_ok: state_bounds.iter().all(|c| c.holds),
        state_bounds,
        lemmas: lemmas.then(|| check_lemmas(instance, &graph)),
    })
}

/// Optimal against truthful utility, with the state counts alongside.
pub fn check_ratio_bound(instance: &Instance, config: &DpConfig) -> Result<BoundReport> {
    analyze(instance, config, false)
}

/// As [`check_ratio_bound`], plus the per-set structural checks.
pub fn check_state_bounds(instance: &Instance, config: &DpConfig) -> Result<BoundReport> {
    analyze(instance, config, true)
}
