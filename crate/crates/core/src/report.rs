//! Serialization helpers shared by report structs.

use serde::Serializer;

pub(crate) fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

