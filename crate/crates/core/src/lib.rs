//! Exact word-metric geometry of the discrete Heisenberg group `H₃(ℤ)` and
//! of finitely generated abelian groups.

pub mod cayley;
pub mod group;
pub mod heis_norm;
pub mod horoboundary;
pub mod isoperimetric;
pub mod polygon;

pub use cayley::{Ball, Budget, CayleyGraph, HeisGraph, HeisPoint, MetricError};
pub use group::{eval_word, GeneratorSet, GroupError, HeisElement, Word};
pub use polygon::{CountVector, Polygon, Vec2, VectorSet};
