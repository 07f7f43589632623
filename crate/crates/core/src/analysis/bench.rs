//! Parameter sweeps over random instances, one CSV row per run.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::StateBounds;
use super::report::ratio_status;
use crate::error::{Error, Result};
use crate::generators::{generate, RandomSpec};
use crate::instance::Instance;
use crate::simulate::{profile_metrics, truthful_utility};
use crate::solver::{solve, Algorithm, SolveOptions};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl Seeds {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { start, count } => (*start..start + count).collect(),
        }
    }
}

fn unconstrained() -> Vec<Option<usize>> {
    vec![None]
}

fn dp() -> Algorithm {
    Algorithm::Dp
}

/// Sweep description, read from JSON. Runs are the cartesian product
/// `agents x items x manipulator_picks x target_range x seeds`, in that
/// nesting order. `null` in the last two grids leaves the parameter free.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub agents: Vec<usize>,
    pub items: Vec<usize>,
    #[serde(default = "unconstrained")]
    pub manipulator_picks: Vec<Option<usize>>,
    #[serde(default = "unconstrained")]
    pub target_range: Vec<Option<usize>>,
    pub seeds: Seeds,
    #[serde(default = "dp")]
    pub solver: Algorithm,
    /// Second solver whose value is compared against `solver`'s.
    #[serde(default)]
    pub oracle: Option<Algorithm>,
    /// Worker threads; 0 or 1 runs sequentially.
    #[serde(default)]
    pub threads: usize,
    /// Fill the `elapsed_ms` column. Off by default so output is reproducible.
    #[serde(default)]
    pub timings: bool,
}

/// `(n, m, mu_target, rg_target, seed)`.
type GridPoint = (usize, usize, Option<usize>, Option<usize>, u64);

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn grid(&self) -> Vec<GridPoint> {
        let seeds = self.seeds.values();
        let mut runs = Vec::new();
        for &n in &self.agents {
            for &m in &self.items {
                for &mu in &self.manipulator_picks {
                    for &rg in &self.target_range {
                        for &seed in &seeds {
                            runs.push((n, m, mu, rg, seed));
                        }
                    }
                }
            }
        }
        runs
    }
}

/// Column order of the CSV report.
pub const CSV_HEADER: [&str; 24] = [
    "n",
    "m",
    "mu_target",
    "rg_target",
    "seed",
    "mu",
    "rg_max",
    "solver",
    "value",
    "u_truthful",
    "ratio",
    "ratio_ok",
    "states",
    "distinct_sets",
    "bound_m_pow",
    "bound_mu",
    "bound_rg_n",
    "bound_rg",
    "bounds_ok",
    "oracle",
    "oracle_value",
    "consistent",
    "elapsed_ms",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub mu_target: Option<usize>,
    pub rg_target: Option<usize>,
    pub seed: u64,
    pub mu: Option<usize>,
    pub rg_max: Option<usize>,
    pub solver: String,
    pub value: Option<u64>,
    pub u_truthful: Option<u64>,
    pub ratio: Option<String>,
    pub ratio_ok: Option<bool>,
    pub states: Option<usize>,
    pub distinct_sets: Option<usize>,
    pub bound_m_pow: Option<String>,
    pub bound_mu: Option<String>,
    pub bound_rg_n: Option<String>,
    pub bound_rg: Option<String>,
    pub bounds_ok: Option<bool>,
    pub oracle: Option<String>,
    pub oracle_value: Option<u64>,
    pub consistent: Option<bool>,
    pub elapsed_ms: Option<String>,
    pub error: Option<String>,
}

impl SweepRow {
    fn blank(config: &SweepConfig, n: usize, m: usize, mu: Option<usize>, rg: Option<usize>, seed: u64) -> Self {
        SweepRow {
            n,
            m,
            mu_target: mu,
            rg_target: rg,
            seed,
            mu: None,
            rg_max: None,
            solver: config.solver.to_string(),
            value: None,
            u_truthful: None,
            ratio: None,
            ratio_ok: None,
            states: None,
            distinct_sets: None,
            bound_m_pow: None,
            bound_mu: None,
            bound_rg_n: None,
            bound_rg: None,
            bounds_ok: None,
            oracle: config.oracle.map(|a| a.to_string()),
            oracle_value: None,
            consistent: None,
            elapsed_ms: None,
            error: None,
        }
    }
}

fn fill(row: &mut SweepRow, inst: &Instance, config: &SweepConfig, options: &SolveOptions) -> Result<()> {
    let pm = profile_metrics(inst);
    row.mu = Some(inst.manipulator_picks());
    row.rg_max = pm.range_max;
    let bounds = StateBounds::for_instance(inst);
    row.bound_m_pow = Some(bounds.m_pow.to_string());
    row.bound_mu = Some(bounds.mu.to_string());
    row.bound_rg_n = bounds.rg_n.map(|b| b.to_string());
    row.bound_rg = bounds.rg.map(|b| b.to_string());

    let start = Instant::now();
    let result = solve(inst, config.solver, options)?;
    if config.timings {
        row.elapsed_ms = Some(format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
    }
    let ut = truthful_utility(inst);
    let (ratio, status) = ratio_status(result.optimal_utility, ut);
    row.value = Some(result.optimal_utility);
    row.u_truthful = Some(ut);
    row.ratio = ratio.map(|r| r.to_string());
    row.ratio_ok = Some(status != super::report::RatioStatus::Violated);
    if let Some(dp) = result.stats.as_dp() {
        row.states = Some(dp.states);
        row.distinct_sets = Some(dp.distinct_sets);
        row.bounds_ok = Some((dp.distinct_sets as u128) <= bounds.tightest());
    }
    if let Some(oracle) = config.oracle {
        let other = solve(inst, oracle, options)?;
        row.oracle_value = Some(other.optimal_utility);
        row.consistent = Some(other.optimal_utility == result.optimal_utility);
    }
    Ok(())
}

/// Runs every grid point. Failures land in the row's `error` column.
pub fn bench_sweep(config: &SweepConfig, options: &SolveOptions) -> Result<Vec<SweepRow>> {
    let runs = config.grid();
    let one = |&(n, m, mu, rg, seed): &(usize, usize, Option<usize>, Option<usize>, u64)| {
        let mut row = SweepRow::blank(config, n, m, mu, rg, seed);
        let spec = RandomSpec {
            agents: n,
            items: m,
            manipulator_picks: mu,
            target_range: rg,
        };
        let outcome = generate(seed, &spec).and_then(|inst| fill(&mut row, &inst, config, options));
        if let Err(e) = outcome {
            row.error = Some(e.to_string());
        }
        row
    };
    if config.threads <= 1 {
        return Ok(runs.iter().map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidParameters(e.to_string()))?;
    Ok(pool.install(|| runs.par_iter().map(one).collect()))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> SweepConfig {
        SweepConfig::from_json(json).unwrap()
    }

    fn csv_text(rows: &[SweepRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn header_matches_row_fields() {
        let c = config(r#"{"agents":[2],"items":[3],"seeds":[1]}"#);
        let rows = bench_sweep(&c, &SolveOptions::default()).unwrap();
        let text = csv_text(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.next().unwrap().split(',').count(), CSV_HEADER.len());
        let json = serde_json::to_value(&rows[0]).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = CSV_HEADER.to_vec();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }

    #[test]
    fn empty_grid_is_header_only() {
        let c = config(r#"{"agents":[],"items":[4],"seeds":[1,2]}"#);
        let rows = bench_sweep(&c, &SolveOptions::default()).unwrap();
        assert!(rows.is_empty());
        assert_eq!(csv_text(&rows), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn grid_with_oracle() {
        let c = config(
            r#"{"agents":[2,3],"items":[4,5,6,7],"seeds":{"start":0,"count":10},"oracle":"brute","threads":4}"#,
        );
        let rows = bench_sweep(&c, &SolveOptions::default()).unwrap();
        assert_eq!(rows.len(), 80);
        assert_eq!((rows[0].n, rows[0].m, rows[0].seed), (2, 4, 0));
        assert_eq!((rows[79].n, rows[79].m, rows[79].seed), (3, 7, 9));
        for r in &rows {
            assert_eq!(r.error, None);
            assert_eq!(r.consistent, Some(true));
            assert_eq!(r.ratio_ok, Some(true));
            assert!(r.elapsed_ms.is_none());
        }
        let sequential = bench_sweep(&SweepConfig { threads: 1, ..c }, &SolveOptions::default()).unwrap();
        assert_eq!(csv_text(&rows), csv_text(&sequential));
    }

    #[test]
    fn failures_are_recorded_in_row() {
        let c = config(r#"{"agents":[2],"items":[3],"manipulator_picks":[5, 1],"seeds":[0],"solver":"brute"}"#);
        let rows = bench_sweep(&c, &SolveOptions::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].error.as_deref().unwrap().contains("manipulator"));
        assert_eq!(rows[1].error, None);
        assert_eq!(rows[1].mu, Some(1));
        assert_eq!(rows[1].states, None);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(SweepConfig::from_json(r#"{"agents":[2],"items":[3],"seeds":[0],"colour":1}"#).is_err());
    }
}
