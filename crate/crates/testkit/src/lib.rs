//! Test support for the epk crates: random generators plus reference
//! oracles that work on plain string-keyed models.

pub mod gen;
pub mod oracle;
pub mod raw;

pub use raw::RawModel;
