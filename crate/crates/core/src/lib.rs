//! Terminal-cut mimicking networks at desk scale.
//!
//! This crate constructs two families of hard instances for cut
//! sparsification — a planar family whose mimicking networks need
//! exponentially many edges, and a layered family on which merge-based
//! compression cannot identify any vertex pair — and certifies their
//! properties with exact arithmetic: rational max-flow/min-cut, full cut
//! profiles over all terminal bipartitions, merge compression, incidence
//! matrix rank over the rationals, and exact plane-graph duality.

pub mod cut;
pub mod dblexp;
pub mod error;
pub mod geom;
pub mod graph;
pub mod io;
pub mod plane;
pub mod planar;
pub mod profile;
pub mod rank;
pub mod weight;

pub use error::{GraphError, Result};
pub use graph::{Bipartition, TerminalGraph};
pub use weight::Weight;
