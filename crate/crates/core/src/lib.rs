//! Graph isomorphism heuristics built on free-energy encodings.
//!
//! A graph is turned into a dense nonnegative weight matrix that layers
//! reciprocal shortest distances with the Perron numbers of neighbourhood,
//! shared-neighbour and union-neighbour subgraphs. The Perron number of that
//! matrix is the graph's *canonical number*, a relabeling-invariant that in
//! practice separates non-isomorphic graphs. [`nutcracker`] builds on the
//! same matrices to recover explicit node correspondences, and [`oracle`]
//! provides exhaustive ground truth for small graphs.
//!
//! ```
//! use nutcracker_core::{canonical_number, generators, Permutation};
//!
//! let g = generators::petersen();
//! let h = g.permuted(&Permutation::random(10, 7)).unwrap();
//! let (a, b) = (canonical_number(&g).unwrap(), canonical_number(&h).unwrap());
//! assert!(nutcracker_core::precision::equal_at(a, b, 9));
//! ```

pub mod canonical;
pub mod generators;
pub mod graph;
pub mod io;
pub mod nutcracker;
pub mod oracle;
pub mod precision;
pub mod real;
pub mod spectral;

pub use canonical::{
    canonical_number, overlay_node_weights, refine, weighted_canonical_number, CanonicalError,
    Encoder, NodeWeights, RefinedMatrix,
};
pub use graph::{apply_permutation, random_permutation, Graph, GraphError, Permutation};
pub use io::{emit_graph6, parse_edge_list, parse_graph6, Format};
pub use nutcracker::{
    find_correspondence, partition_by_stationary, verify_correspondence, Correspondence,
    MatchFailure, NutCracker, Partition,
};
pub use oracle::{brute_force_isomorphism, exact_canonical_form, CanonicalForm};
pub use precision::{Agreement, DigitPolicy, NearPair, PairScan};
pub use real::{Extended, Real};
pub use spectral::{
    all_pairs_shortest_distance, parry_stationary, perron, reciprocal_distance_matrix,
    subgraph_free_energy, DistanceMatrix, PowerIteration, SpectralError, SpectralResult,
    WeightMatrix,
};
