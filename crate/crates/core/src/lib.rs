//! Finite order-theoretic duality toolkit: posets, their upset Heyting
//! algebras, bisimulation-style quotients, colorings, and generators for the
//! level-structured spaces used to separate locally finite varieties.

pub mod abomination;
pub mod algebra;
pub mod coloring;
pub mod error;
pub mod lemma;
pub mod poset;
pub mod probe;
pub mod reduction;
pub mod verify;

pub use error::{Error, Result};
pub use poset::{ElementSet, Poset};
