//! Kuranishi hulls and the representation-side oracle.

pub mod kuranishi;
pub mod oracle;

pub use kuranishi::{
    build_hull, has_mc_lift, kuranishi_splittings, obstruction_class, obstruction_of_lift, quadratic_vs_cup, random_lift,
    HullPresentation, KuranishiSplittings,
};
pub use oracle::{
    brute_force_def, hull_vs_oracle, representation_classes, HullOracleReport, OracleClasses, OracleMethod,
    RepresentationProblem,
};

/// Primes tried in turn when reducing a rational hull.
pub const FALLBACK_PRIMES: [u32; 4] = [3, 5, 7, 11];

/// Default truncation order over the rationals.
pub const DEFAULT_ORDER: u32 = 6;
