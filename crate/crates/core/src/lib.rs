//! Fractal transformations between attractors of iterated function systems.
//!
//! Geometry is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it for the common cases.

pub mod calculus;
pub mod catalog;
pub mod checks;
pub mod code_space;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod haar;
pub mod hilbert_space;
pub mod ifs;
pub mod measure;
pub mod oracles;
pub mod quadrature;
pub mod raster;
pub mod region;
pub mod scalar;
pub mod top_section;
pub mod transform;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point64 = geometry::Point<f64>;
pub type Point32 = geometry::Point<f32>;
pub type Ifs64 = ifs::ContractiveIfs<f64>;
pub type Ifs32 = ifs::ContractiveIfs<f32>;
pub type Measure64 = ifs::EmpiricalMeasure<f64>;
pub type Measure32 = ifs::EmpiricalMeasure<f32>;
pub type Pair64 = transform::TransformPair<f64>;
pub type Pair32 = transform::TransformPair<f32>;
pub type Function64 = hilbert_space::SampledFunction<f64>;
pub type Flow64 = flow::Flow<f64>;
