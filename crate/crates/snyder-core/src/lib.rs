//! Curved momentum space from group factorization.
//!
//! A pseudo-orthogonal group factorizes uniquely over the fixed-point
//! subgroup of an involution; the leftover transvection set is a K-loop — a
//! mildly nonassociative, noncommutative cousin of an abelian group whose
//! product composes momenta on a curved momentum space. This crate realizes
//! that construction end to end:
//!
//! * [`ambient`] — metrics, generators, matrix exp/log, the involution;
//! * [`kloop`] — the factorization, the loop product and precession, and
//!   checkers for the loop identities;
//! * [`snyder`] — momentum charts on the de Sitter quadric and three
//!   computation paths for the momentum sum `p ⊕ q`, plus relativistic
//!   velocity addition on the Lorentz preset;
//! * [`lts`] — the Lie triple system of the decomposition, its axioms, the
//!   embedding closure, and finite-difference extraction of the trilinear
//!   product from the loop;
//! * [`star`] — the induced star product on plane waves and coordinate
//!   monomials, and the sampled scalar-field action with its symmetry
//!   checks;
//! * [`finite_hopf`] — exact rational verification of the loop-algebra /
//!   function-algebra / cross-product structure on finite Cayley tables;
//! * [`fixtures`] — the finite tables, including a reproducibly constructed
//!   nonassociative K-loop of order 21;
//! * [`report`] — machine-readable verification reports with the convention
//!   ledger embedded.

pub mod ambient;
pub mod finite_hopf;
pub mod fixtures;
pub mod kloop;
pub mod lts;
pub mod report;
pub mod snyder;
pub mod star;
