#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ontoforge::extract::extract_corpus;
use ontoforge::extract::Tagger;
use ontoforge::lattice::{ApplicabilityMatrix, FormalConcept, LabelSeed, DEFAULT_BOUND};
use ontoforge::nominal::PredicateLexicon;
use ontoforge::pipeline::{build, tag_raw, Built};
use ontoforge::{ConceptId, PropertySlot};
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Raw corpus plus optional seed file through the full pipeline at τ=1.
pub fn built(corpus: &str, seeds: Option<&str>) -> Built {
    let sentences = tag_raw(&fixture(corpus), &Tagger::default());
    let ex = extract_corpus(&sentences, &PredicateLexicon::seed());
    assert!(
        ex.skipped.is_empty(),
        "{corpus} has unmatched sentences: {:?}",
        ex.skipped
    );
    let seeds = seeds
        .map(|s| LabelSeed::parse(&fixture(s)).unwrap())
        .unwrap_or_default();
    build(&ex.records, 1, &seeds, DEFAULT_BOUND).unwrap()
}

pub fn hierarchy_fixture() -> Built {
    built("hierarchy_corpus.txt", Some("hierarchy_seeds.tsv"))
}

pub fn assembly_fixture() -> Built {
    built("assembly_corpus.txt", Some("assembly_seeds.tsv"))
}

pub fn food_fixture() -> Built {
    built("food_corpus.txt", None)
}

pub fn c(s: &str) -> ConceptId {
    s.parse().unwrap()
}

pub fn p(s: &str) -> PropertySlot {
    s.parse().unwrap()
}

/// Concepts `c0..`, properties `P0..`, each cell present with probability
/// `density`.
pub fn random_matrix<R: Rng>(
    rng: &mut R,
    n_concepts: usize,
    n_props: usize,
    density: f64,
) -> ApplicabilityMatrix {
    let concepts: Vec<ConceptId> = (0..n_concepts).map(|i| c(&format!("c{i}"))).collect();
    let props: Vec<PropertySlot> = (0..n_props).map(|j| p(&format!("P{j}"))).collect();
    let mut entries = Vec::new();
    for ci in &concepts {
        for pj in &props {
            if rng.random_bool(density) {
                entries.push(((ci.clone(), pj.clone()), 1));
            }
        }
    }
    ApplicabilityMatrix::with_universe(concepts, props, entries, 1).unwrap()
}

/// Closes every subset of the concept set by direct scans of `app`.
pub fn oracle_concepts(
    m: &ApplicabilityMatrix,
) -> BTreeSet<(BTreeSet<ConceptId>, BTreeSet<PropertySlot>)> {
    let cs = m.concepts();
    assert!(cs.len() <= 16, "oracle is exponential");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << cs.len()) {
        let subset: Vec<&ConceptId> = (0..cs.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &cs[i])
            .collect();
        let intent: BTreeSet<PropertySlot> = m
            .properties()
            .iter()
            .filter(|q| subset.iter().all(|x| m.app(q, x)))
            .cloned()
            .collect();
        let extent: BTreeSet<ConceptId> = cs
            .iter()
            .filter(|x| intent.iter().all(|q| m.app(q, x)))
            .cloned()
            .collect();
        out.insert((extent, intent));
    }
    out
}

pub fn as_pairs(
    concepts: &[FormalConcept],
) -> BTreeSet<(BTreeSet<ConceptId>, BTreeSet<PropertySlot>)> {
    concepts
        .iter()
        .map(|f| (f.extent.clone(), f.intent.clone()))
        .collect()
}

/// Sparse concept-level corpus: `n_records` distinct (concept, property) pairs
/// drawn uniformly over `n_concepts` × `n_props`, counts 1..=3.
pub fn scale_records(
    seed: u64,
    n_records: usize,
    n_concepts: usize,
    n_props: usize,
) -> Vec<ontoforge::PredicationRecord> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n_records);
    while out.len() < n_records {
        let (ci, pi) = (
            rng.random_range(0..n_concepts),
            rng.random_range(0..n_props),
        );
        if !seen.insert((ci, pi)) {
            continue;
        }
        let slot = ["arg0", "agent", "object"][pi % 3];
        let rec = ontoforge::PredicationRecord::new(
            ontoforge::Subject::Concept(c(&format!("k{ci:04}"))),
            p(&format!("Q{pi:04}/{slot}")),
            rng.random_range(1..=3),
        )
        .unwrap();
        out.push(rec);
    }
    out
}
