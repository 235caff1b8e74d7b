//! Exact-arithmetic workbench for deciding finite Hilbert (semi)stability of
//! special curves with respect to diagonal one-parameter subgroups.
//!
//! The crate is organized around five layers:
//!
//! * [`ratlin`] — arbitrary-precision rationals, incremental rank maintenance,
//!   and a rational simplex solver with dual certificates.
//! * [`models`] — the four curve families (balanced ribbon, balanced double
//!   A-curve, rosary in its canonical and bicanonical embeddings, Wiman curve)
//!   together with their restriction engines mapping monomials in the
//!   distinguished variables to exact section vectors.
//! * [`basiskit`] — monomial-basis candidates, symbolic weight forms,
//!   multibasis expression trees and certificate verification.
//! * [`constructions`] — the explicit basis families and certificates for each
//!   curve family, with closed-form expected weights.
//! * [`engine`] — an independent decision procedure: matroid-greedy minimum
//!   weight bases inside a cutting-plane loop over the state polytope, plus a
//!   brute-force oracle for tiny instances.

pub mod basiskit;
pub mod constructions;
pub mod engine;
pub mod models;
pub mod ratlin;

// re-exports land once the model layer exists
pub use ratlin::Rat;
