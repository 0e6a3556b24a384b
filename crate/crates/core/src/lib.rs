//! Chain-condition ranks of finite marked groups.

pub mod catalog;
pub mod dsl;
pub mod error;
pub mod group;
pub mod invariants;
pub mod oracle;
pub mod ordinal;
pub mod verify;
pub mod wftree;

pub use error::{Error, Result};
pub use ordinal::Ordinal;
