//! Benchmark-only crate; see `benches/workbench.rs`. Fixtures shared by the
//! benchmarks live here so they compile once.

use bks_core::{catalog, RaySet};

pub fn ceg18() -> RaySet {
    catalog::ceg18().rays
}

pub fn peres24() -> RaySet {
    catalog::peres24().rays
}
