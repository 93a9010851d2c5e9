//! Ontology induction from predication evidence.
//!
//! The pipeline reads tagged sentences (or elicited candidate lists), turns
//! them into applicability evidence `app(p, c)`, builds the concept lattice of
//! that evidence and answers type questions over it.

pub mod elicit;
pub mod extract;
pub mod lattice;
pub mod model;
pub mod nominal;
pub mod pipeline;
pub mod query;
pub mod store;

pub use model::{
    Amount, Complement, ConceptId, IndividualId, Level, MeasureValue, Object, PredicationRecord,
    PrimitiveRelation, PrimitiveTriple, PropertySlot, Slot, Subject, TropeId,
};
