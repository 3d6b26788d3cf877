//! Exact intersection theory on divisor lattices of normal surfaces:
//! connectivity of divisors, Zariski decompositions, resolution data and
//! numerical criteria for adjoint linear systems.

pub mod cli;
pub mod connectivity;
pub mod corpus;
pub mod criteria;
pub mod dualgraph;
pub mod error;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod parse;
pub mod rational;
pub mod resolution;
pub mod zariski;

pub use error::{Error, Result};
pub use lattice::{Cluster, Divisor, IntersectionLattice, SingClass};
pub use rational::Rational;
