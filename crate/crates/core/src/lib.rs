//! Torus geometric invariant theory over a non-archimedean valued field.
//!
//! Points of flag varieties are given by exact coordinates in a field of
//! finite Puiseux sums. The crate decides (semi)stability for split and
//! relative tori, computes intervals of semistability as exact polyhedra in
//! apartments and in the rank-one tree, and decomposes ample cones into GIT
//! chambers.

pub mod apartment;
pub mod interval;
pub mod linalg;
pub mod models;
pub mod polyhedra;
pub mod rational;
pub mod rootdata;
pub mod torusgit;
pub mod treebuilding;
pub mod valfield;
