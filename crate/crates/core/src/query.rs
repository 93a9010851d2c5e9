//! Questions over a built matrix and lattice: meaning profiles, signature
//! types, sensibility checks and common supertypes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lattice::{ApplicabilityMatrix, TypeLattice};
use crate::model::{ConceptId, Object, PrimitiveRelation, PropertySlot, Subject, TropeId};
use crate::nominal::{reify, NominalError, PredicateLexicon};

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("unknown concept {0}")]
    UnknownConcept(String),
    #[error("unknown property {0}")]
    UnknownProperty(String),
    #[error(transparent)]
    Nominal(#[from] NominalError),
}

impl QueryError {
    pub fn is_unknown_symbol(&self) -> bool {
        matches!(
            self,
            QueryError::UnknownConcept(_) | QueryError::UnknownProperty(_)
        )
    }
}

/// Relations a profile buckets by. `hasValue` entries carry the attribute
/// noun (age, height) as their trope.
pub const PROFILE_DIMENSIONS: [PrimitiveRelation; 6] = [
    PrimitiveRelation::HasProp,
    PrimitiveRelation::InState,
    PrimitiveRelation::AgentOf,
    PrimitiveRelation::ParticipantIn,
    PrimitiveRelation::ObjectOf,
    PrimitiveRelation::HasValue,
];

/// The dimensions of meaning of one concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeaningProfile {
    pub concept: ConceptId,
    pub dimensions: BTreeMap<PrimitiveRelation, BTreeSet<TropeId>>,
}

impl MeaningProfile {
    pub fn bucket(&self, r: PrimitiveRelation) -> &BTreeSet<TropeId> {
        &self.dimensions[&r]
    }

    pub fn total(&self) -> usize {
        self.dimensions.values().map(BTreeSet::len).sum()
    }
}

/// Outcome of a sensibility check with its justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sensibility {
    pub sensible: bool,
    /// Most specific node containing the concept.
    pub concept_node: usize,
    /// Signature node of the property.
    pub signature_node: usize,
    /// Cover-edge chain from the concept node up to the signature node when
    /// sensible, otherwise up to the top.
    pub path: Vec<usize>,
}

pub struct QueryEngine<'a> {
    matrix: &'a ApplicabilityMatrix,
    lattice: &'a TypeLattice,
    lexicon: &'a PredicateLexicon,
}

impl<'a> QueryEngine<'a> {
    pub fn new(
        matrix: &'a ApplicabilityMatrix,
        lattice: &'a TypeLattice,
        lexicon: &'a PredicateLexicon,
    ) -> Self {
        QueryEngine {
            matrix,
            lattice,
            lexicon,
        }
    }

    pub fn lattice(&self) -> &TypeLattice {
        self.lattice
    }

    fn known_concept(&self, c: &ConceptId) -> Result<(), QueryError> {
        self.matrix
            .concept_index(c)
            .map(|_| ())
            .ok_or_else(|| QueryError::UnknownConcept(c.to_string()))
    }

    fn known_property(&self, p: &PropertySlot) -> Result<(), QueryError> {
        self.matrix
            .property_index(p)
            .map(|_| ())
            .ok_or_else(|| QueryError::UnknownProperty(p.to_string()))
    }

    pub fn profile(&self, c: &ConceptId) -> Result<MeaningProfile, QueryError> {
        let props = self
            .matrix
            .applicable(c)
            .map_err(|_| QueryError::UnknownConcept(c.to_string()))?;
        let mut dimensions: BTreeMap<PrimitiveRelation, BTreeSet<TropeId>> = PROFILE_DIMENSIONS
            .iter()
            .map(|&r| (r, BTreeSet::new()))
            .collect();
        let subject = Subject::Concept(c.clone());
        for p in props {
            let triple = reify(p, &subject, self.lexicon)?;
            let trope = match triple.object() {
                Object::Trope(t) => t.clone(),
                Object::Measure(m) => {
                    TropeId::new(m.attribute(), p.predicate()).map_err(NominalError::from)?
                }
                Object::Concept(_) | Object::Individual(_) => continue,
            };
            dimensions
                .entry(triple.relation())
                .or_default()
                .insert(trope);
        }
        Ok(MeaningProfile {
            concept: c.clone(),
            dimensions,
        })
    }

    /// The node whose extent is `extent({p})`: the type `p` can be said of.
    pub fn signature_type(&self, p: &PropertySlot) -> Result<usize, QueryError> {
        self.known_property(p)?;
        self.lattice
            .attribute_node(p)
            .ok_or_else(|| QueryError::UnknownProperty(p.to_string()))
    }

    pub fn is_sensible(&self, p: &PropertySlot, c: &ConceptId) -> Result<Sensibility, QueryError> {
        self.known_concept(c)?;
        let signature_node = self.signature_type(p)?;
        let concept_node = self
            .lattice
            .object_node(c)
            .ok_or_else(|| QueryError::UnknownConcept(c.to_string()))?;
        let sensible = self.lattice.node(signature_node).concept.extent.contains(c);
        let target = if sensible {
            signature_node
        } else {
            self.lattice.top()
        };
        let path = self
            .lattice
            .upward_path(concept_node, target)
            .unwrap_or_else(|| vec![concept_node]);
        Ok(Sensibility {
            sensible,
            concept_node,
            signature_node,
            path,
        })
    }

    /// Sensibility of a binary predication `pred(agent, object)`: both
    /// argument slots must accept their fillers.
    pub fn is_sensible_predication(
        &self,
        predicate: &str,
        agent: &ConceptId,
        object: &ConceptId,
    ) -> Result<(bool, Sensibility, Sensibility), QueryError> {
        let slot = |s| {
            PropertySlot::new(predicate, s)
                .map_err(|_| QueryError::UnknownProperty(predicate.to_string()))
        };
        let a = self.is_sensible(&slot(crate::model::Slot::Agent)?, agent)?;
        let o = self.is_sensible(&slot(crate::model::Slot::Object)?, object)?;
        Ok((a.sensible && o.sensible, a, o))
    }

    /// Least node whose extent contains both concepts.
    pub fn common_supertype(&self, c1: &ConceptId, c2: &ConceptId) -> Result<usize, QueryError> {
        self.known_concept(c1)?;
        self.known_concept(c2)?;
        self.lattice
            .smallest_containing(&[c1.clone(), c2.clone()])
            .ok_or_else(|| QueryError::UnknownConcept(format!("{c1}, {c2}")))
    }
}
