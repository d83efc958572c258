//! Per-thread work budget for reductions.
//!
//! Untrusted task files can describe computations far beyond desk scale. The
//! dispatcher installs a budget; the Gröbner engine charges one unit per
//! reduction step and aborts with [`Error::Budget`] once it runs dry.

use std::cell::Cell;

use crate::error::{Error, Result};

thread_local! {
    static REMAINING: Cell<Option<u64>> = const { Cell::new(None) };
}

/// Runs `f` with at most `limit` work units available on this thread.
pub fn with_budget<R>(limit: u64, f: impl FnOnce() -> R) -> R {
    let saved = REMAINING.with(|r| r.replace(Some(limit)));
    let out = f();
    REMAINING.with(|r| r.set(saved));
    out
}

pub(crate) fn charge(units: u64) -> Result<()> {
    REMAINING.with(|r| match r.get() {
        None => Ok(()),
        Some(left) if left >= units => {
            r.set(Some(left - units));
            Ok(())
        }
        Some(_) => {
            r.set(Some(0));
            Err(Error::Budget)
        }
    })
}
