//! Finite lattices, join-homomorphism sandwiching, and stability of
//! approximate homomorphisms.
//!
//! Start with [`lattice::Lattice`] and the [`builders`], build maps with
//! [`maps::LatticeMap`], then repair them with [`sandwich`], [`stabilize`]
//! or [`neighborhoods`]. Real-valued monotone repair lives in [`monotone`].
//! [`oracles`] holds brute-force references for testing.

pub mod builders;
pub mod corpus;
pub mod error;
pub mod lattice;
pub mod maps;
pub mod monotone;
pub mod neighborhoods;
pub mod oracles;
pub mod sandwich;
pub mod stabilize;

pub use error::{Error, Result, Witness};
pub use lattice::{ElementId, Lattice};
pub use maps::LatticeMap;
pub use oracles::DEFAULT_BUDGET;
