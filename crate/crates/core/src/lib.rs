pub mod admm;
pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod numerics;
pub mod plot;
pub mod sbm;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{adjacency_from_points, ClusterAssignment, Graph, PointAdjacency, SensitiveAttributes};
