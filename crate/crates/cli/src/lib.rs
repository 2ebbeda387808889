//! Spec file format and report rendering for the `grpd` binary.

pub mod emit;
pub mod spec;
