//! Exact computation of Hopf-type formulae for group homology, with a bar
//! resolution oracle and checks of Galois-theoretic constructions on finite groups.

pub mod abelian;
pub mod bar;
pub mod config;
pub mod corpus;
pub mod cube;
pub mod error;
pub mod galois;
pub mod group;
pub mod hopf;
pub mod nilpotent;
mod serde_int;
pub mod verify;

pub use error::{Error, Result};
