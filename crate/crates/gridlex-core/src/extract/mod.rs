//! Constructive subarray extraction.
//!
//! [`monotone`] finds monotone and inconsistently monotone subarrays;
//! [`lex`] finds lexicographic subarrays inside increasing arrays and
//! chains the two stages into the full lex-monotone pipeline.
//!
//! Every extractor is best-effort: it runs its pigeonhole pipeline on
//! whatever sizes exist and reports the first stage that comes up empty
//! instead of erroring. Guarantee thresholds from the underlying counting
//! arguments are astronomically large in higher dimensions, so staged
//! failure is the common outcome on small random inputs, while structured
//! inputs (and anything at or above the 1- and 2-dimensional thresholds)
//! succeed.

pub mod lex;
pub mod monotone;

use crate::grid::Subgrid;

/// Direction of a monotone subsequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Outcome of a best-effort extraction. `K` carries what the extractor
/// certifies about the found subgrid (a monotonicity pattern, a lex type).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extraction<K> {
    Found { subgrid: Subgrid, kind: K },
    Failed(StageFailure),
}

/// Which pipeline stage ran dry and the sizes it had to work with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageFailure {
    pub stage: &'static str,
    pub achieved: Vec<usize>,
}

impl<K> Extraction<K> {
    pub fn found(subgrid: Subgrid, kind: K) -> Self {
        Extraction::Found { subgrid, kind }
    }

    pub fn failed(stage: &'static str, achieved: Vec<usize>) -> Self {
        Extraction::Failed(StageFailure { stage, achieved })
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Extraction::Found { .. })
    }

    pub fn subgrid(&self) -> Option<&Subgrid> {
        match self {
            Extraction::Found { subgrid, .. } => Some(subgrid),
            Extraction::Failed(_) => None,
        }
    }
}

impl<K> std::fmt::Display for Extraction<K>
where
    K: std::fmt::Display,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extraction::Found { subgrid, kind } => {
                write!(f, "found {:?} [{kind}]", subgrid.shape())
            }
            Extraction::Failed(fail) => {
                write!(f, "failed at {} (achieved {:?})", fail.stage, fail.achieved)
            }
        }
    }
}
