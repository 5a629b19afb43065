//! Orbit polynomials of finite subgroups of PGL(2,q) and the factorization of
//! `c*T^(q+1) + d*T^q - a*T - b` by specializing them.
//!
//! The modules build on each other in order: finite fields ([`gf`]),
//! polynomials ([`upoly`]), Moebius transformations ([`moebius`]), subgroups and
//! orbits ([`grouporbit`]), rational invariants ([`invariants`]), structured
//! factorization ([`structfactor`]) and conjugacy classes ([`classes`]).

pub mod classes;
pub mod cli;
pub mod error;
pub mod gf;
pub mod grouporbit;
pub mod invariants;
pub mod limits;
mod linalg;
pub mod moebius;
pub mod structfactor;
mod report;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{extend, field_create, minimal_poly, prime_field, FieldCtx, FieldElem, FieldEmbedding};
pub use upoly::{factorize, is_irreducible, roots_in, Factorization, Poly};
pub use moebius::{parse_entries, parse_moebius, representative_scale, ElementClass, Moebius, ProjPoint};
