//! Colored best match graphs: construction from leaf-colored trees, recognition,
//! least resolved trees, informative triples and BUILD.
//!
//! The `parallel` feature (on by default) runs per-vertex, per-component and per-color-pair
//! work on the rayon pool. Every parallel entry point also accepts [`Execution::Sequential`].

pub mod bmg;
mod dsu;
pub mod formats;
pub mod graph;
pub mod hierarchy;
pub mod ids;
pub mod ncolor;
pub mod par;
pub mod rbmg;
pub mod tree;
pub mod triples;
pub mod two_color;

pub use bmg::{bmg_of_tree, bmg_of_tree_with, bmg_oracle, rbmg_of_tree, simulate, simulate_batch, SimulationConfig, SimulationError, TreeShape};
pub use graph::{ColoredDigraph, Difference, GraphError, ThinnessPartition, UndirectedColoredGraph};
pub use hierarchy::{Hierarchy, HierarchyError};
pub use ids::{Color, Labels, VertexId};
pub use ncolor::{recognize_batch, recognize_ncbmg, recognize_ncbmg_with, redundant_edges_n, RecognitionReport, RecognizeOptions, Rejection, Route, Verdict};
pub use par::Execution;
pub use rbmg::{check_2crbmg_necessary, check_2crbmg_necessary_with, RbmgInputError, RbmgVerdict};
pub use tree::{Edge, LeafColoredTree, NodeId, Topology, TreeError};
pub use triples::{aho_graph, build, build_from_trees, informative_triples, lrt_via_triples, BuildError, RootedTriple, TripleError, TripleSet};
pub use two_color::{check_axioms, lrt_via_hierarchy, redundant_edges_2, AxiomFailure, AxiomVerdict, TwoColorReject};
