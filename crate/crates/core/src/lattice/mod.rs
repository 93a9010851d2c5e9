//! Applicability matrix, Galois closure, concept enumeration and the labeled
//! type hierarchy built from them.

mod bitset;
mod context;
mod enumerate;
mod hierarchy;
mod matrix;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{ConceptId, PropertySlot};

pub use bitset::BitSet;
pub use context::Context;
pub use enumerate::next_closure_concepts;
pub use hierarchy::{build_lattice, LabelSeed, LatticeNode, SeedTarget, TypeLattice};
pub use matrix::{build_matrix, property_order, ApplicabilityMatrix, PropertyOrder};

/// Default cap on the number of concepts and of property slots.
pub const DEFAULT_BOUND: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unknown concept {0}")]
    UnknownConcept(String),
    #[error("unknown property {0}")]
    UnknownProperty(String),
    #[error("individual-level record for {0}; generalize records before building the matrix")]
    IndividualLevel(String),
    #[error("evidence threshold must be at least 1")]
    ZeroThreshold,
    #[error("matrix has {size} {what}, over the capacity bound of {bound}")]
    Capacity {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("concept list is not a complete lattice: {0}")]
    Incomplete(String),
    #[error("seed file line {line}: {message}")]
    Seed { line: usize, message: String },
    #[error("duplicate seed label {0}")]
    DuplicateLabel(String),
}

/// A mutually closed (extent, intent) pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalConcept {
    pub extent: BTreeSet<ConceptId>,
    pub intent: BTreeSet<PropertySlot>,
}

/// Every formal concept of `m`, in NextClosure (lectic) order. Fails when
/// either side of the matrix exceeds `bound`.
pub fn enumerate_concepts_bounded(
    m: &ApplicabilityMatrix,
    bound: usize,
) -> Result<Vec<FormalConcept>, LatticeError> {
    for (what, size) in [
        ("concepts", m.concepts().len()),
        ("property slots", m.properties().len()),
    ] {
        if size > bound {
            return Err(LatticeError::Capacity { what, size, bound });
        }
    }
    let ctx = m.context();
    Ok(next_closure_concepts(&ctx)
        .into_iter()
        .map(|(e, i)| FormalConcept {
            extent: m.concepts_of(&e),
            intent: m.properties_of(&i),
        })
        .collect())
}

pub fn enumerate_concepts(m: &ApplicabilityMatrix) -> Result<Vec<FormalConcept>, LatticeError> {
    enumerate_concepts_bounded(m, DEFAULT_BOUND)
}
