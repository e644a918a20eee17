pub mod amat;
pub mod artin;
pub mod cli;
pub mod complexes;
pub mod cosimplicial;
pub mod dgla;
pub mod error;
pub mod hull;
pub mod linalg;
pub mod mpoly;
pub mod orbits;
pub mod sdc;
pub mod weights;

pub use error::{Error, Result};
