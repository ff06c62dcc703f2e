//! Set-systems with restricted intersections modulo a composite `m`, the
//! covering-vector families derived from them, and an access-structure-hiding
//! secret sharing scheme built on access structure tokens.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, timing and the
//! command-line front end live in the companion `hass-cli` crate.

#![no_std]

extern crate alloc;

pub mod access;
pub mod ases;
pub mod bbrpoly;
pub mod counting;
pub mod covvec;
pub mod error;
pub mod numth;
pub mod oracle;
pub mod scheme;
pub mod setsys;

pub use error::{Error, Result};
