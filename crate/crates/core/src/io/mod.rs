//! Text formats: dissimilarity files, extended Newick, DOT and JSON reports.

mod dissim_file;
mod dot;
mod newick;
mod report;

pub use dissim_file::{parse_dissimilarity, print_dissimilarity, DissimFileError};
pub use dot::export_dot;
pub use newick::{parse_network, print_network, NetworkFileError};
pub use report::{report_json, report_table};
