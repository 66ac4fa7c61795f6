//! Generalized Hermite polynomials H_{m,n}: exact roots and their
//! elliptic-integral asymptotics.

pub mod actions;
pub mod cli;
pub mod compare;
pub mod elliptic;
pub mod error;
pub mod hermite;
pub mod lattice;
pub mod region;
pub mod roots;

pub use error::{Error, Result};
