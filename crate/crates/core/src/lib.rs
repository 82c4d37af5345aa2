//! Prize-collecting Steiner forest via moat growing with dynamic coloring.

pub mod coloring;
pub mod error;
pub mod flow;
pub mod format;
pub mod generate;
pub mod harness;
pub mod instance;
pub mod ipcsf;
pub mod moat;
pub mod oracle;
pub mod pcsf3;
pub mod scalar;
pub mod solution;

pub use error::{Error, Result};
pub use instance::{Edge, Pair, PcsfInstance, Vertex, VertexSet};
pub use scalar::{Extended, Scalar};
pub use solution::Solution;

/// Exact rational scalar used by the solvers and the CLI.
pub type Rat = num_rational::BigRational;
pub type ExtRat = Extended<Rat>;
pub type Instance = PcsfInstance<Rat>;
