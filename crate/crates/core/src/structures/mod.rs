//! Graph and hypergraph data model plus the named constructions.

mod constructions;
mod hom;
mod hypergraph;
mod involution;

pub use constructions::{
    complete_graph, cycle_graph, grid, levi, named, path_graph, pendant_c4, petersen,
    single_edge, star_graph, tight_cycle,
};
pub use hom::hom_count;
pub use hypergraph::{DegreeSequence, EdgeSubsets, Hypergraph, Linearity, MAX_SUBSET_EDGES};
pub use involution::{detect_stable_involution, StableInvolutionCertificate, MAX_INVOLUTION_VERTICES};
