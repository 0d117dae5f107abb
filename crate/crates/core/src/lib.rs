//! Exact cluster-expansion engine for torus homomorphism partition functions.

pub mod error;
pub mod exp_poly;
pub mod formulas;
pub mod graph_model;
pub mod kbounded;
pub mod rational;
pub mod torus;

pub mod cluster;

pub use cluster::{l1_closed_form, l_k, l_terms, truncation_error_heuristic, RootParity};
pub use error::{Error, Result};
pub use exp_poly::{ExpPoly, FloatEval, GradedSeries, Term};
pub use formulas::{
    hardcore_l_forms, kbounded_asymptotic, l1_closed, qcolor_ck, qcolor_f, qcolor_l2, z_formula,
    ZFormula,
};
pub use graph_model::{
    cayley_graph, common_neighborhood, delta, dominant_patterns, load_graph, DominantPatternSet,
    Pattern, VertexSet, WeightedGraph,
};
pub use kbounded::{
    count_via_hom, enumerate_bk, mod_bijection, mod_inverse, phi_bijection, phi_inverse,
    KBoundedFunction, LipFunction,
};
pub use rational::{format_rational, parse_rational, Rational, ScaledFloat};
pub use torus::{
    global_cluster_series, measures_table, partition_function, partition_function_transfer,
    verify_tilde_identity, Caps, HomTable, OracleReport, TildeReport, Torus, TorusSpec,
};
