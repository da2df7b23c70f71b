//! Minimal lattice-basis completions for primitive vectors of a planar
//! lattice, their skewness and signed-ratio statistics modulo one, and
//! truncated evaluation of the orbit series `V_m(z, s)`.
//!
//! The per-vector arithmetic is generic over [`Scalar`]; the aliases below
//! name the instantiations used in practice.

pub mod enumerate;
pub mod equidist;
pub mod error;
pub mod lattice;
pub mod scalar;
pub mod series;
pub mod summation;

pub use enumerate::{
    count_vs_asymptotic, enumerate, for_each_sample, orbit_count_scaling, Bound, CountComparison,
    EnumResult, EnumSpec, NormCutoff, OrbitCountRow,
};
pub use equidist::{
    histogram, interval_fraction, reduce_mod_one, star_discrepancy, weyl_sums, Histogram,
    ModOneSample, WeylReport,
};
pub use error::{Error, Result};
pub use lattice::{
    bezout, check_geometry, geometry_report, minimal_completion, minimal_vector_length,
    orbit_sample, signed_ratio, skewness, skewness_exact, Completion, GeometryReport, GramForm,
    LatticeShape, OrbitSample, PrimitiveVector, Rational,
};
pub use scalar::Scalar;
pub use series::{
    eisenstein_reference, eval_v, laplacian_residual, tail_bound, LaplacianCheck, SeriesPoint,
};

/// Double-precision form, the default float path.
pub type GramF64 = GramForm<f64>;
/// Single-precision form.
pub type GramF32 = GramForm<f32>;
/// Integer form with the common denominator folded in; exact.
pub type GramExact = GramForm<i128>;
/// Rational form with unit scale; exact, slower than [`GramExact`].
pub type GramRational = GramForm<Rational>;
