//! Seeded and structured instance generators.

mod clique;
mod graph;
mod mcc;
mod random;
mod rng;
mod sidon;
mod tight;

pub use clique::{gen_clique_reduction, ClassSignature, CliqueMetadata, UtilityClass};
pub use graph::GraphInput;
pub use mcc::{gen_mcc_reduction, Block, MccMetadata, TauSet};
pub use random::{gen_correlated, gen_random, generate, CorrelatedMetadata, RandomSpec};
pub use rng::SplitMix64;
pub use sidon::{is_prime, smallest_prime_above, SidonTable};
pub use tight::{four_item_example, gen_tight_family};
