//! Computable core of length-product inequalities over Z₂-homology bases.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2`]: dense linear algebra over the two-element field.
//! - [`multilinear`]: multilinear forms over Z₂ and their mod-2 invariants.
//! - [`homology`]: simplicial Z₂ cohomology and cup-product forms of closed manifolds.
//! - [`graphs`]: metric graphs and the greedy Z₂-homology cycle basis with its certified bound.
//! - [`lattice`]: flat Finsler tori, successive minima and Minkowski-type checks.
//! - [`symplectic`]: pairing permutations for nondegenerate alternating forms.

pub mod error;
pub mod gf2;
pub mod graphs;
pub mod homology;
pub mod lattice;
pub mod multilinear;
pub mod symplectic;

mod text;

pub use error::{Error, Result};
