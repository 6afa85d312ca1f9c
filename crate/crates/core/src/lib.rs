//! Exact computations around Jack characters, their structure constants and
//! the bipartite-map models of the Matchings-Jack and b-conjectures.

pub mod characters;
pub mod coeffs;
pub mod embeddings;
pub mod error;
pub mod handshake;
pub mod jack;
pub mod maps;
pub mod matchings;
pub mod nonorientability;
pub mod partitions;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};
pub use partitions::Partition;
