//! Combinatorics of buildings with chambers missing: metric graphs and their
//! rank functional, polygonal complexes and their links, extension search into
//! Euclidean buildings of type Ã₂, and developments of universal covers.

pub mod complex;
pub mod develop;
pub mod error;
pub mod extend;
pub mod iso;
pub mod mgraph;
pub mod plane;
pub mod prescribe;
pub mod rank;
pub mod surgery;

pub use mgraph::MetricGraph;
