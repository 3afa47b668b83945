//! KAK factorizations `g = k1 * a * k2` of the classical matrix groups
//! over the reals, complexes and quaternions.
//!
//! The crate is layered: [`numeric`] supplies quaternion-aware dense
//! matrices, [`templates`] builds the structured middle factors,
//! [`groups`] describes the ambient groups and their involutions,
//! [`registry`] catalogues every factorization cell, [`decompose`] recovers
//! factors from a group element and [`harness`] ties it together into
//! reproducible verification sweeps.

pub mod error;
pub mod numeric;

pub use error::{Error, Result};
pub mod groups;
pub mod templates;
pub mod registry;
pub mod decompose;
pub mod harness;
