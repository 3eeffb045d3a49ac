//! Exact computation with complex projective line arrangements.
//!
//! The crate provides four layers:
//!
//! * [`cyclotomic`] — exact arithmetic in the cyclotomic fields `Q(zeta_n)`,
//!   Galois actions, and certified complex embeddings backed by
//!   arbitrary-precision dyadic interval arithmetic ([`ball`]).
//! * [`combinatorics`] — abstract intersection data `C = (L, P)`, incidence
//!   graphs, automorphism groups and orbits.
//! * [`arrangement`] — projective line arrangements with cyclotomic
//!   coefficients, exact intersection lattices, projectivities and complex
//!   conjugation, together with the built-in 11- and 12-line arrangements.
//! * [`wiring`] / [`invariant`] — certified braided wiring diagrams along a
//!   constructed path through the singular values, the conjugating braid of a
//!   triangle cycle, signed over-crossing counts, and the resulting
//!   root-of-unity invariant that separates arrangements with equal
//!   combinatorics.
//!
//! Everything upstream of the final sign determinations is exact; interval
//! refinement is only ever used to decide the sign of a quantity that has
//! already been proven nonzero in the field.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `zariski` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod ball;
pub mod character;
pub mod combinatorics;
pub mod cyclotomic;
pub mod invariant;
pub mod render;
pub mod wiring;

pub use cyclotomic::{CycNum, Embedding, Rational};
