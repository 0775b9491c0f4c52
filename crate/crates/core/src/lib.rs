//! Linear kernelization for Dominating Set and Connected Dominating Set on
//! graphs that exclude a fixed topological minor.
//!
//! The pipeline is assembled from independently testable parts:
//!
//! * [`graph`]: immutable graphs, neighbourhoods and generators.
//! * [`treedec`]: rooted tree decompositions with adhesions, torsos and
//!   peaks, plus min-fill / min-degree heuristics.
//! * [`solvers`]: exact ground truth (subset enumeration, branch and bound,
//!   treewidth DP).
//! * [`approx`]: constant-factor approximation for colored dominating set
//!   and connectivity augmentation.
//! * [`boundaried`]: boundaried graphs, gluing, signatures and
//!   representative tables.
//! * [`protrusion`]: detection and replacement of protrusions.
//! * [`slicedec`]: heavy-edge marking and slice decompositions.
//! * [`reducer`]: irrelevant-vertex rule, separator recursion and the
//!   kernelization driver.

pub mod approx;
pub mod boundaried;
pub mod error;
pub mod graph;
pub mod protrusion;
pub mod reducer;
pub mod slicedec;
pub mod solvers;
pub mod treedec;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};

/// The two parameterized problems handled by the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    Ds,
    Cds,
}

impl Problem {
    /// Approximation factor multiplier in front of `h`: the DS stage is a
    /// `5h` approximation and connectivity augmentation triples it.
    pub fn eta_multiplier(self) -> usize {
        match self {
            Problem::Ds => 5,
            Problem::Cds => 15,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Ds => "ds",
            Problem::Cds => "cds",
        })
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ds" => Ok(Problem::Ds),
            "cds" => Ok(Problem::Cds),
            other => Err(Error::InvalidInput(format!("unknown problem `{other}`"))),
        }
    }
}
