//! End-to-end glue: corpus text → records → matrix → lattice.

use thiserror::Error;

use crate::extract::{generalize, kind_facts, ExtractError, TaggedSentence, Tagger};
use crate::lattice::{
    build_lattice, build_matrix, enumerate_concepts_bounded, ApplicabilityMatrix, LabelSeed,
    LatticeError, TypeLattice,
};
use crate::model::PredicationRecord;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Tags raw text, one sentence per line. Blank lines and `#` comments are
/// skipped.
pub fn tag_raw(text: &str, tagger: &Tagger) -> Vec<TaggedSentence> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .filter_map(|l| tagger.tag(l))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Built {
    /// Concept-level evidence the matrix was built from.
    pub records: Vec<PredicationRecord>,
    /// Individual-level records with no kind link, left out of the matrix.
    pub residue: Vec<PredicationRecord>,
    pub matrix: ApplicabilityMatrix,
    pub lattice: TypeLattice,
    pub warnings: Vec<String>,
}

/// Generalizes mixed-level records through their own kind facts, then builds
/// the matrix at threshold `tau` and its labeled lattice.
pub fn build(
    records: &[PredicationRecord],
    tau: u64,
    seeds: &LabelSeed,
    bound: usize,
) -> Result<Built, PipelineError> {
    let g = generalize(records, &kind_facts(records))?;
    let matrix = build_matrix(&g.records, tau)?;
    let concepts = enumerate_concepts_bounded(&matrix, bound)?;
    let (lattice, warnings) = build_lattice(&concepts, seeds)?;
    Ok(Built {
        records: g.records,
        residue: g.residue,
        matrix,
        lattice,
        warnings,
    })
}
