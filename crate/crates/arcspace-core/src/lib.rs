//! Exact computations on arc spaces of projective toric varieties.
//!
//! Lattice polytopes and their integer points, toric rings, jet expansions and
//! brute-force rank oracles for graded pieces of reduced arc rings, monomial
//! orders and cube generating data, nilpotent relation series, partially
//! symmetric polynomial duals, and closed-form graded characters.
//!
//! Everything is exact and allocation-only; the crate is `no_std` + `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arcjets;
pub mod characters;
pub mod cubedata;
pub mod exactpoly;
pub mod lattice;
pub mod linalg;
pub mod relations;
pub mod symfun;
pub mod toricring;
