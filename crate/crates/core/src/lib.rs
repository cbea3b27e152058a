//! Clones of finitary and eventually-constant infinitary operations,
//! their relations and Galois connections, over small finite domains.

pub mod bitset;
pub mod domain;
pub mod error;
pub mod finite;
pub mod galois;
pub mod matrices;
pub mod omega_ops;
pub mod omega_rel;
pub mod threads;

pub use domain::{Elem, FiniteDomain};
pub use error::{Error, Result};
