//! Worker-pool configuration for the grid evaluations. All parallel loops
//! in this crate reduce in a fixed order, so results are identical for any
//! thread count.

use crate::error::{Error, Result};

/// Cap the global worker pool. Must be called before the first parallel
/// computation; later calls on an already-built pool are reported as errors
/// but the pool keeps working.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(Error::InvalidParameter(
            "thread count must be at least 1".into(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}
