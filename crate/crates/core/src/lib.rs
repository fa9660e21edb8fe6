//! Lattice index codes carved from rings of algebraic integers.
//!
//! Messages `w_k ∈ O_K/p_k` are combined through the Chinese remainder
//! isomorphism `O_K/∏p_k ≅ ∏ O_K/p_k`, represented by minimum-energy coset
//! representatives and transmitted through the canonical embedding.

pub mod analysis;
pub mod arith;
pub mod codec;
pub mod error;
pub mod experiment;
pub mod lattice;
pub mod numberfield;
pub mod polyfp;
pub mod sim;

pub use error::{Error, Result};
pub use numberfield::{AlgebraicInt, FieldFamily, Ideal, NumberField, Splitting, SplittingKind};
