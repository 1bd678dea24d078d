//! Property tags attached to rejections.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dissim::{Taxon, TaxonSet};

/// The eight representability properties and the two symbolic-ultrametric
/// conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    U1,
    U2,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::P1,
        Property::P2,
        Property::P3,
        Property::P4,
        Property::P5,
        Property::P6,
        Property::P7,
        Property::P8,
        Property::U1,
        Property::U2,
    ];

    pub const REPRESENTABILITY: [Property; 8] = [
        Property::P1,
        Property::P2,
        Property::P3,
        Property::P4,
        Property::P5,
        Property::P6,
        Property::P7,
        Property::P8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::P1 => "P1",
            Property::P2 => "P2",
            Property::P3 => "P3",
            Property::P4 => "P4",
            Property::P5 => "P5",
            Property::P6 => "P6",
            Property::P7 => "P7",
            Property::P8 => "P8",
            Property::U1 => "U1",
            Property::U2 => "U2",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rejection of a dissimilarity, tagged with the violated property and a
/// small set of taxa exhibiting the violation.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("not level-1 representable: {property} violated ({reason})")]
pub struct NotRepresentable {
    pub property: Property,
    pub witness: Vec<Taxon>,
    pub reason: &'static str,
}

impl NotRepresentable {
    pub fn new(property: Property, witness: Vec<Taxon>, reason: &'static str) -> Self {
        NotRepresentable {
            property,
            witness,
            reason,
        }
    }

    /// Message naming the witness taxa.
    pub fn describe(&self, taxa: &TaxonSet) -> String {
        format!(
            "{} (witness: {})",
            self,
            taxa.names_of(&self.witness).join(",")
        )
    }
}
