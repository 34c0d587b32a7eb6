//! Network protection codes: binary erasure codes mapped onto link-disjoint
//! connections, the rotating encoded-transmission scheme, a failure
//! recovery simulator, and an ILP provisioner comparing coded protection
//! against 1+1 protection.

pub mod cli;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod provision;
pub mod scheme;
pub mod sim;

pub use error::{Error, Result};
