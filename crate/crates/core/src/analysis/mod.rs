//! Bound verification and benchmark sweeps.

mod bench;
mod bounds;
mod report;

pub use bench::{bench_sweep, write_csv, Seeds, SweepConfig, SweepRow, CSV_HEADER};
pub use bounds::{check_lemmas, LemmaReport, StateBounds};
pub use report::{
    check_ratio_bound, check_state_bounds, ratio_status, BoundReport, ExactRatio, RatioStatus,
    StateBoundCheck,
};
