use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::achievability::{solve_bruteforce_rankings, solve_subset_enum};
use crate::dp::{solve_dp, DpConfig};
use crate::error::Result;
use crate::ilp::solve_ilp_naive;
use crate::instance::Instance;
use crate::result::ManipulationResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "dp")]
    Dp,
    #[serde(rename = "subset")]
    Subset,
    #[serde(rename = "brute")]
    Brute,
    #[serde(rename = "ilp-naive")]
    IlpNaive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Dp,
        Algorithm::Subset,
        Algorithm::Brute,
        Algorithm::IlpNaive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Subset => "subset",
            Algorithm::Brute => "brute",
            Algorithm::IlpNaive => "ilp-naive",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected dp, subset, brute or ilp-naive)"))
    }
}

/// Resource ceilings for every solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub dp: DpConfig,
    /// Maximum number of candidate bundles for subset enumeration.
    pub subset_budget: u128,
    /// Maximum item count for ranking enumeration.
    pub brute_max_items: usize,
    /// Maximum item count for the naive integer program search.
    pub ilp_max_items: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            dp: DpConfig::default(),
            subset_budget: 10_000_000,
            brute_max_items: 8,
            ilp_max_items: 8,
        }
    }
}

pub fn solve(instance: &Instance, algorithm: Algorithm, options: &SolveOptions) -> Result<ManipulationResult> {
    match algorithm {
        Algorithm::Dp => solve_dp(instance, &options.dp),
        Algorithm::Subset => solve_subset_enum(instance, options.subset_budget),
        Algorithm::Brute => solve_bruteforce_rankings(instance, options.brute_max_items),
        Algorithm::IlpNaive => solve_ilp_naive(instance, options.ilp_max_items),
    }
}
