//! Exact computation in truncated free tensor algebras: group expansions,
//! Lyndon-basis free Lie algebra, nilpotent presentations, lower central and
//! derived rank tables, and numerical parallel transport for braid-like
//! monodromy.

pub mod error;
pub mod expand;
pub mod json;
pub mod kz;
pub mod lie;
pub mod malcev;
pub mod presets;
pub mod ranks;
pub mod ratmat;
pub mod scalar;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Coeff;

/// Exact rational scalars (arbitrary precision).
pub type Rat = num_rational::BigRational;

/// Truncated tensor-algebra series over the rationals.
pub type NcSeries = series::Series<Rat>;

/// Tensor square of [`NcSeries`], used for coproduct computations.
pub type NcSeries2 = series::Series2<Rat>;

/// Truncated tensor-algebra series over complex doubles, for transport.
pub type NumSeries = series::Series<num_complex::Complex64>;
