//! Exact linear algebra over the rationals and prime fields.

pub mod decompose;
pub mod factor;
pub mod matrix;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod subspace;

pub use decompose::{charpoly, charpoly_irreducible_factors, primary_decomposition};
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::{Field, Scalar};
pub use subspace::{complement, image, invariant_complement, kernel_basis, Subspace};
