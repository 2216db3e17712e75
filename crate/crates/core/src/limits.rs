//! Size caps shared by every construction.
//!
//! The caps can be scaled with the `EQUIVARIUM_SIZE_GUARD` environment
//! variable: a positive integer multiplies every cap, and `off` disables them.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "EQUIVARIUM_SIZE_GUARD";

/// Hard cap on group order.
pub const GROUP_ORDER: usize = 120;
/// Cap on group order for the verification suites.
pub const SUITE_GROUP_ORDER: usize = 24;
/// Cap on `symmetric(n)`.
pub const SYMMETRIC_DEGREE: usize = 5;
/// Cap on morphisms per category.
pub const MORPHISMS: usize = 10_000;
/// Cap on elements of a preorder or poset.
pub const ELEMENTS: usize = 10_000;
/// Cap on simplices stored in a single degree of a simplicial set.
pub const SIMPLICES_PER_DEGREE: usize = 2_000_000;
/// Cap on either dimension of a boundary matrix.
pub const MATRIX_DIM: usize = 10_000;

fn scale() -> Option<usize> {
    match std::env::var(ENV_VAR) {
        Ok(v) if v.eq_ignore_ascii_case("off") => None,
        Ok(v) => Some(v.trim().parse::<usize>().ok().filter(|s| *s > 0).unwrap_or(1)),
        Err(_) => Some(1),
    }
}

/// Effective value of `cap` after applying the environment override.
pub fn effective(cap: usize) -> usize {
    match scale() {
        Some(s) => cap.saturating_mul(s),
        None => usize::MAX,
    }
}

/// Fails with [`Error::SizeGuard`] when `size` exceeds the (scaled) cap.
pub fn check(what: impl Into<String>, size: usize, cap: usize) -> Result<()> {
    let cap = effective(cap);
    if size > cap {
        Err(Error::SizeGuard {
            what: what.into(),
            size,
            cap,
        })
    } else {
        Ok(())
    }
}
