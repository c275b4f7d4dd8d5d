//! Exact-arithmetic Fock-space engine for Severi degrees of toric surfaces
//! and Hurwitz numbers of curves.

pub mod error;
pub mod exactalg;
pub mod fock;
pub mod genfun;
pub mod operators;
pub mod oracle;
pub mod partitions;
pub mod rationality;
pub mod spectra;

pub use error::{Error, Result};
