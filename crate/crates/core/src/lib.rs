//! Rigidity certificates and flex monitoring for oriented triangulated
//! polyhedra: exact ℚ-independence of edge lengths, dihedral angles, numerical
//! flex tracing, and the angle combinations conserved along a flex.

pub mod certificates;
pub mod cli;
pub mod complex;
pub mod flex;
pub mod geometry;
pub mod lengths;
pub mod models;
