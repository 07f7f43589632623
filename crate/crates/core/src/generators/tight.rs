use crate::error::{Error, Result};
use crate::instance::Instance;

/// The running three-agent, four-item example: sequence `a1 a2 a3 a1`,
/// `a2` ranks `i3 i4 i1 i2`, `a1` and `a3` rank the items in index order.
pub fn four_item_example(utilities: [u64; 4]) -> Result<Instance> {
    Instance::from_indices(
        vec![0, 1, 2, 0],
        vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1], vec![0, 1, 2, 3]],
        utilities.to_vec(),
    )
}

/// The four-item example with utilities `(M, M-1, M-2, 0)`. Truthful play
/// earns `M`, manipulation earns `2M - 3`, so the ratio approaches 2.
pub fn gen_tight_family(scale: u64) -> Result<Instance> {
    if scale < 3 {
        return Err(Error::InvalidParameters(format!(
            "tight family needs scale >= 3, got {scale}"
        )));
    }
    four_item_example([scale, scale - 1, scale - 2, 0])
}
