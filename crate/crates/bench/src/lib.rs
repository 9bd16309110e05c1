//! Shared inputs for the criterion benchmarks.

use truncvar_core::simulate::{sample_path, DiffusionSpec, GridSpec, RngSeed};
use truncvar_core::SamplePath;

/// Standard Brownian path with `n + 1` samples on `[0, 1]`.
pub fn brownian(n: usize, seed: u64) -> SamplePath {
    let grid = GridSpec::new(1.0, 1.0 / n as f64).expect("valid grid");
    sample_path(
        DiffusionSpec::BmDrift { mu: 0.0 },
        grid,
        &RngSeed::new(seed),
        0,
    )
    .expect("valid spec")
}
