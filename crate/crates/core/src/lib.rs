//! Composition operators on weighted spaces of functions over discrete
//! metric spaces, checked at finite truncation scale.
//!
//! Everything is generic over a [`Scalar`]. The exact rational instance is
//! the default; `f64` and `f32` are available for quick exploration.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod functions;
pub mod metric_space;
pub mod operators;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod symbols;
pub mod verdict;
pub mod weights;

pub use error::{Error, Result};
pub use functions::{FiniteFn, Growth, NormValue, Value};
pub use metric_space::{Space, TableSpace, Vertex, VertexId};
pub use scalar::{Dist, Scalar};
pub use symbols::{Completeness, SymbolMap, TableMap};
pub use verdict::{Certificate, Status, Verdict, Witness};
pub use weights::{TailProfile, Weight};

/// Exact rational scalars.
pub type Rational = num_rational::BigRational;

pub type ExactWeight = Weight<Rational>;
pub type ExactFn = FiniteFn<Rational>;
pub type ExactVerdict = Verdict<Rational>;
pub type ExactGrowth = Growth<Rational>;
pub type FloatWeight = Weight<f64>;
pub type FloatFn = FiniteFn<f64>;
pub type FloatVerdict = Verdict<f64>;
