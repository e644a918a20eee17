//! Δ-complexes, local systems, twisted cochains and their cohomology.

pub mod cochain;
pub mod cohomology;
pub mod delta;
pub mod local_system;
pub mod presentation;

pub use cochain::{bracket, cup, cup_bracket, differential, differential_matrix, Cochain};
pub use cohomology::{betti, cohomology, split, CohomologyData};
pub use delta::DeltaComplex;
pub use local_system::{adjoint_system, make_local_system, unit_index, unvec, vec_of, LocalSystem};
pub use presentation::{parse_word, presentation_complex, Letter, Presentation, PresentationComplex};
