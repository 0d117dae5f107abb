//! Fixtures shared by the benchmarks.

use torushom_core::rational::rat;
use torushom_core::{dominant_patterns, Pattern, WeightedGraph};

/// Named target graphs used across the benchmarks.
pub fn targets() -> Vec<(&'static str, WeightedGraph)> {
    vec![
        ("K3", WeightedGraph::complete(3)),
        ("K5", WeightedGraph::complete(5)),
        (
            "hard-core",
            WeightedGraph::hard_core(rat(1, 1)).expect("positive fugacity"),
        ),
    ]
}

/// The first dominant pattern of a graph with at least one edge.
pub fn lead_pattern(graph: &WeightedGraph) -> Pattern {
    dominant_patterns(graph)
        .expect("graph has an edge")
        .patterns[0]
}
