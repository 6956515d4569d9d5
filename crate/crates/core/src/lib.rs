//! Reconstruction codes for words corrupted by uniform tandem duplications.
//!
//! * [`dupcore`]: words, duplication, descendant cones, roots and cone coordinates.
//! * [`metric`]: the duplication distance and cone intersection sizes.
//! * [`simplex`]: codes on integer simplices under the half-Manhattan metric.
//! * [`utr`]: reconstruction codes, their checkers, construction and decoding.
//! * [`capacity`]: RLL constraint-graph data and the rate analysis.

pub mod capacity;
pub mod combinatorics;
pub mod dupcore;
pub mod error;
pub mod metric;
pub mod oracle;
pub mod simplex;
pub mod utr;

pub use capacity::{CapacityProfile, ConstraintGraph, FixedPoint, Regime, RegimeDistance};
pub use dupcore::{DupParams, PhiImage, RootDecomposition, Word};
pub use error::{Error, Result};
pub use metric::Distance;
pub use simplex::{SidonSet, SimplexCode, SimplexPoint};
pub use utr::{Construction, SimulationReport, UtrCode, Verdict, Violation};
