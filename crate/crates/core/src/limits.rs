//! Process-wide size caps.
//!
//! Two separate limits exist. The enumeration cap bounds anything that walks
//! every element of a field or projective line. The field cap bounds the
//! cardinality of a field we are willing to do arithmetic in; arithmetic cost
//! grows with the degree, not the cardinality, so this one is much larger.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Environment variable overriding the enumeration cap.
pub const ENUMERATION_CAP_VAR: &str = "ORBITFACTOR_SIZE_CAP";
/// Environment variable overriding the field cardinality cap.
pub const FIELD_CAP_VAR: &str = "ORBITFACTOR_FIELD_CAP";

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;
pub const DEFAULT_GROUP_CAP: u64 = 1 << 16;
pub const DEFAULT_FIELD_CAP: u64 = u64::MAX;

static ENUMERATION_CAP: AtomicU64 = AtomicU64::new(DEFAULT_ENUMERATION_CAP);
static GROUP_CAP: AtomicU64 = AtomicU64::new(DEFAULT_GROUP_CAP);
static FIELD_CAP: AtomicU64 = AtomicU64::new(DEFAULT_FIELD_CAP);

pub fn enumeration_cap() -> u64 {
    ENUMERATION_CAP.load(Ordering::Relaxed)
}

pub fn set_enumeration_cap(cap: u64) {
    ENUMERATION_CAP.store(cap, Ordering::Relaxed);
}

pub fn group_cap() -> u64 {
    GROUP_CAP.load(Ordering::Relaxed)
}

pub fn set_group_cap(cap: u64) {
    GROUP_CAP.store(cap, Ordering::Relaxed);
}

pub fn field_cap() -> u64 {
    FIELD_CAP.load(Ordering::Relaxed)
}

pub fn set_field_cap(cap: u64) {
    FIELD_CAP.store(cap, Ordering::Relaxed);
}

/// Reads both environment overrides. Unparseable values are ignored.
pub fn load_from_env() {
    if let Some(v) = std::env::var(ENUMERATION_CAP_VAR).ok().and_then(|s| s.parse().ok()) {
        set_enumeration_cap(v);
    }
    if let Some(v) = std::env::var(FIELD_CAP_VAR).ok().and_then(|s| s.parse().ok()) {
        set_field_cap(v);
    }
}

pub(crate) fn check_enumeration(what: &'static str, size: u128) -> Result<()> {
    let cap = enumeration_cap() as u128;
    if size > cap {
        return Err(Error::SizeCapExceeded { what, size, cap });
    }
    Ok(())
}

pub(crate) fn check_group(size: u128) -> Result<()> {
    let cap = group_cap() as u128;
    if size > cap {
        return Err(Error::SizeCapExceeded { what: "group order", size, cap });
    }
    Ok(())
}

pub(crate) fn check_field(size: u128) -> Result<()> {
    let cap = field_cap() as u128;
    if size > cap {
        return Err(Error::SizeCapExceeded { what: "field cardinality", size, cap });
    }
    Ok(())
}
