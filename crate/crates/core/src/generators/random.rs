use serde::Serialize;

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::instance::{Instance, MANIPULATOR};
use crate::simulate::profile_metrics;

/// Parameters of a random instance. `manipulator_picks` fixes μ(a₁);
/// `target_range` switches the non-manipulator rows to the correlated model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub agents: usize,
    pub items: usize,
    pub manipulator_picks: Option<usize>,
    pub target_range: Option<usize>,
}

impl RandomSpec {
    pub fn new(agents: usize, items: usize) -> Self {
        RandomSpec {
            agents,
            items,
            manipulator_picks: None,
            target_range: None,
        }
    }
}

/// What the correlated generator promised and what it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelatedMetadata {
    pub target_range_max: usize,
    pub realized_range_max: Option<usize>,
}

/// Uniform random instance: every row and every sequence entry is drawn
/// independently; utilities are `m, m-1, ..., 1` along the manipulator's row.
pub fn gen_random(seed: u64, n: usize, m: usize) -> Result<Instance> {
    generate(seed, &RandomSpec::new(n, m))
}

/// Non-manipulator rows are block-shuffles of one shared base ranking, so
/// every item's rank varies by less than `target` across them.
pub fn gen_correlated(
    seed: u64,
    n: usize,
    m: usize,
    target: usize,
) -> Result<(Instance, CorrelatedMetadata)> {
    let spec = RandomSpec {
        target_range: Some(target),
        ..RandomSpec::new(n, m)
    };
    let inst = generate(seed, &spec)?;
    let realized = profile_metrics(&inst).range_max;
    Ok((
        inst,
        CorrelatedMetadata {
            target_range_max: target,
            realized_range_max: realized,
        },
    ))
}

pub fn generate(seed: u64, spec: &RandomSpec) -> Result<Instance> {
    let (n, m) = (spec.agents, spec.items);
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameters(
            "need at least one agent and one item".into(),
        ));
    }
    if let Some(r) = spec.target_range {
        if r == 0 || r > m {
            return Err(Error::InvalidParameters(format!(
                "target range {r} must lie in 1..={m}"
            )));
        }
    }
    let sequence = random_sequence(seed, n, m, spec.manipulator_picks)?;

    let mut rows = SplitMix64::keyed(seed, "profile");
    let mut profile = vec![rows.permutation(m)];
    match spec.target_range {
        None => profile.extend((1..n).map(|_| rows.permutation(m))),
        Some(r) => {
            let base = SplitMix64::keyed(seed, "base").permutation(m);
            // A random offset keeps block boundaries from always sitting at
            // multiples of r.
            let offset = SplitMix64::keyed(seed, "offset").below(r);
            let mut bounds = vec![0];
            let mut next = if offset == 0 { r } else { offset };
            while next < m {
                bounds.push(next);
                next += r;
            }
            bounds.push(m);
            for _ in 1..n {
                let mut row = base.clone();
                for w in bounds.windows(2) {
                    rows.shuffle(&mut row[w[0]..w[1]]);
                }
                profile.push(row);
            }
        }
    }

    let mut utilities = vec![0u64; m];
    for (p, &item) in profile[MANIPULATOR].iter().enumerate() {
        utilities[item] = (m - p) as u64;
    }
    Instance::from_indices(sequence, profile, utilities)
}

fn random_sequence(seed: u64, n: usize, m: usize, mu: Option<usize>) -> Result<Vec<usize>> {
    let mut rng = SplitMix64::keyed(seed, "sequence");
    let Some(mu) = mu else {
        return Ok((0..m).map(|_| rng.below(n)).collect());
    };
    if mu > m || (n == 1 && mu != m) {
        return Err(Error::InvalidParameters(format!(
            "cannot give the manipulator {mu} of {m} picks with {n} agents"
        )));
    }
    let slots = rng.permutation(m);
    let mut sequence = vec![0; m];
    for &t in &slots[mu..] {
        sequence[t] = 1 + rng.below(n - 1);
    }
    Ok(sequence)
}
