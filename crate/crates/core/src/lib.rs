//! Calculus engine for holomorphic buildings in 4-dimensional
//! symplectizations: spectra of asymptotic operators, constrained
//! Conley-Zehnder indices, Fredholm indices and normal Chern numbers of
//! buildings, building surgery, and checks of the degeneration taxonomy of
//! nicely embedded curves.

pub mod buildings;
pub mod cli;
pub mod corpus;
pub mod degeneration;
pub mod error;
pub mod fixtures;
pub mod index;
pub mod io;
pub mod orbits;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
