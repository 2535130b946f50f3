//! Executable conjugacy-separation witnesses for free groups and surface
//! groups, targeting concrete finite p-groups.

pub mod amalgam;
pub mod cert;
pub mod config;
pub mod error;
pub mod lab;
pub mod magnus;
pub mod par;
pub mod pgroups;
pub mod schreier;
pub mod separate;
pub mod words;

pub use config::Config;
pub use error::{Error, Result};
pub use par::Execution;
pub use words::{Alphabet, Letter, Word};
