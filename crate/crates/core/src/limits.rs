//! Process-wide caps on exhaustive enumeration.
//!
//! Every decision procedure in this crate enumerates interpretations, so the
//! cost is exponential in the signature size. The caps turn accidental large
//! inputs into an error instead of a hang.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Environment variable overriding [`DEFAULT_MAX_ATOMS`].
pub const MAX_ATOMS_ENV: &str = "HTFORGET_MAX_ATOMS";

/// Default cap for HT-model enumeration (3^16 pairs worst case).
pub const DEFAULT_MAX_ATOMS: usize = 16;

/// Default cap for exhaustive rule enumeration (16^4 rules).
pub const DEFAULT_MAX_RULE_ATOMS: usize = 4;

/// Hard limit imposed by the `u32` bit encoding of interpretations.
pub const REPRESENTABLE_ATOMS: usize = 30;

static MAX_ATOMS: AtomicUsize = AtomicUsize::new(0);
static MAX_RULE_ATOMS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_RULE_ATOMS);

/// Current HT enumeration cap. Reads [`MAX_ATOMS_ENV`] on first use.
pub fn max_atoms() -> usize {
    match MAX_ATOMS.load(Ordering::Relaxed) {
        0 => {
            let cap = std::env::var(MAX_ATOMS_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
                .unwrap_or(DEFAULT_MAX_ATOMS)
                .min(REPRESENTABLE_ATOMS);
            MAX_ATOMS.store(cap, Ordering::Relaxed);
            cap
        }
        cap => cap,
    }
}

pub fn set_max_atoms(cap: usize) {
    MAX_ATOMS.store(cap.clamp(1, REPRESENTABLE_ATOMS), Ordering::Relaxed);
}

pub fn max_rule_atoms() -> usize {
    MAX_RULE_ATOMS.load(Ordering::Relaxed)
}

pub fn set_max_rule_atoms(cap: usize) {
    MAX_RULE_ATOMS.store(cap.min(8), Ordering::Relaxed);
}

pub(crate) fn check_atoms(size: usize) -> Result<()> {
    let cap = max_atoms();
    if size > cap {
        return Err(Error::SignatureTooLarge { size, cap });
    }
    Ok(())
}

pub(crate) fn check_rule_atoms(size: usize) -> Result<()> {
    let cap = max_rule_atoms();
    if size > cap {
        return Err(Error::SignatureTooLarge { size, cap });
    }
    Ok(())
}
