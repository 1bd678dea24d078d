//! Level-1 network representations of symbolic 3-dissimilarities.
//!
//! The crate decides whether an orthology-style map on 2- and 3-subsets of
//! taxa is induced by a labelled level-1 phylogenetic network, builds the
//! canonical such network when it is, and reports which of the
//! characterising properties fail when it is not.

pub mod cyclebuilder;
pub mod dissim;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod network;
pub mod popping;
pub mod property;
pub mod treebuilder;
pub mod trinet;

pub use dissim::{
    DissimError, PartialDissimilarity, Sym2Dissimilarity, Sym3Dissimilarity, Symbol,
    SymbolAlphabet, Taxon, TaxonSet,
};
pub use gen::{perturb, random_network, GenConfig, GenError};
pub use io::{export_dot, parse_dissimilarity, parse_network, print_dissimilarity, print_network};
pub use network::{LabelledNetwork, NetworkDraft, NetworkError, VertexId};
pub use popping::{
    check_properties, is_representable, leave_one_out_check, network_popping, subset_witness,
    PropertyReport, PropertyVerdict, SubsetError,
};
pub use property::{NotRepresentable, Property};
pub use trinet::{classify, find_cycles, TrinetKind};
