//! Exact-arithmetic VB-groupoids over finite base groupoids.
//!
//! Everything here is computed with arbitrary-precision rational numbers, so
//! every predicate (invertibility, transversality, membership in the general
//! linear 2-groupoid) is decided exactly, with no tolerances. The crate is
//! `no_std` + `alloc`; IO, file formats and the command-line front end live in
//! the companion `grpd-cli` crate.
//!
//! Module map:
//!
//! * [`linalg`] — rational matrices, canonical-form subspaces, solvers;
//! * [`rng`] — the seeded splitmix generator every sampler draws from;
//! * [`groupoid`] — finite groupoids given by composition tables;
//! * [`vbg`] — VB-groupoid data, validation, the example constructors,
//!   duality and right translations;
//! * [`fat`] — elements `(g, H)` of the fat groupoid and its two
//!   representations;
//! * [`gl2`] — the general linear 2-groupoid `GL(l,k)` and `GL(E)`;
//! * [`frame`] — s- and t-bisection frames with their groupoid structure;
//! * [`action`] — the principal 2-action of `GL(l,k)` on frames, change of
//!   coordinates, associated bundles and the round-trip correspondence;
//! * [`suite`] — named verification suites producing deterministic reports;
//! * [`report`] — check records shared by the verification suites.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod action;
pub mod fat;
pub mod frame;
pub mod gl2;
pub mod groupoid;
pub mod linalg;
pub mod report;
pub mod rng;
pub mod suite;
pub mod vbg;

pub use linalg::{Mat, Rat, Subspace};
