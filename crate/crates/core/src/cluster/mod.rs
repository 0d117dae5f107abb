//! Cluster expansion terms `L_{A,B}(k)` as exponential polynomials in `n`.

pub mod clusters;
pub mod lk;
pub mod support;
pub mod taylor;
pub mod ursell;
pub mod weight;

pub use clusters::{cluster_classes, enumerate_clusters, ClusterClass, RootedCluster};
pub use lk::{l1_closed_form, l_k, l_terms, truncation_error_heuristic};
pub use support::{closure_and_codegrees, enumerate_supports, LocalSet, LocalVertex};
pub use taylor::{taylor_expansion_check, TaylorReport};
pub use ursell::{ursell, ursell_uncached, SmallGraph};
pub use weight::{polymer_weight_symbolic, RootParity};

/// Hard cap on the cluster order; cost grows like `e^{O(k log k)}`.
pub const MAX_ORDER: usize = 6;

/// Orders above this are accepted but slow.
pub const DEFAULT_ORDER: usize = 4;
