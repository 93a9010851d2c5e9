use std::collections::{BTreeMap, BTreeSet};

use crate::model::{ConceptId, Level, PredicationRecord, PropertySlot};

use super::bitset::BitSet;
use super::context::Context;
use super::{FormalConcept, LatticeError};

/// Evidence counts over concepts × property slots. `app(p, c)` holds when the
/// count reaches the threshold; the boolean view is always derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplicabilityMatrix {
    concepts: Vec<ConceptId>,
    properties: Vec<PropertySlot>,
    counts: BTreeMap<(usize, usize), u64>,
    tau: u64,
}

/// Sums concept-level evidence into a matrix. Individual-level records are
/// rejected; lift them with [`crate::extract::generalize`] first.
pub fn build_matrix(
    records: &[PredicationRecord],
    tau: u64,
) -> Result<ApplicabilityMatrix, LatticeError> {
    let mut tally: BTreeMap<(&ConceptId, &PropertySlot), u64> = BTreeMap::new();
    for r in records {
        if r.level() != Level::Concept {
            return Err(LatticeError::IndividualLevel(r.subject().to_string()));
        }
        let c = r.subject().as_concept().expect("concept level");
        *tally.entry((c, r.property())).or_default() += u64::from(r.count());
    }
    let counts = tally
        .into_iter()
        .map(|((c, p), n)| ((c.clone(), p.clone()), n));
    ApplicabilityMatrix::from_counts(counts, tau)
}

impl ApplicabilityMatrix {
    /// Builds from (concept, property) → count entries; repeated keys add up.
    pub fn from_counts(
        entries: impl IntoIterator<Item = ((ConceptId, PropertySlot), u64)>,
        tau: u64,
    ) -> Result<Self, LatticeError> {
        Self::with_universe([], [], entries, tau)
    }

    /// Like [`from_counts`](Self::from_counts) but also registers concepts and
    /// properties that may have no evidence at all.
    pub fn with_universe(
        concepts: impl IntoIterator<Item = ConceptId>,
        properties: impl IntoIterator<Item = PropertySlot>,
        entries: impl IntoIterator<Item = ((ConceptId, PropertySlot), u64)>,
        tau: u64,
    ) -> Result<Self, LatticeError> {
        if tau == 0 {
            return Err(LatticeError::ZeroThreshold);
        }
        let mut cs: BTreeSet<ConceptId> = concepts.into_iter().collect();
        let mut ps: BTreeSet<PropertySlot> = properties.into_iter().collect();
        let mut raw: BTreeMap<(ConceptId, PropertySlot), u64> = BTreeMap::new();
        for ((c, p), n) in entries {
            cs.insert(c.clone());
            ps.insert(p.clone());
            *raw.entry((c, p)).or_default() += n;
        }
        let concepts: Vec<ConceptId> = cs.into_iter().collect();
        let properties: Vec<PropertySlot> = ps.into_iter().collect();
        let mut counts = BTreeMap::new();
        for ((c, p), n) in raw {
            if n > 0 {
                let ci = concepts.binary_search(&c).expect("registered");
                let pi = properties.binary_search(&p).expect("registered");
                counts.insert((ci, pi), n);
            }
        }
        Ok(ApplicabilityMatrix {
            concepts,
            properties,
            counts,
            tau,
        })
    }

    pub fn concepts(&self) -> &[ConceptId] {
        &self.concepts
    }

    pub fn properties(&self) -> &[PropertySlot] {
        &self.properties
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    /// Non-zero cells as (concept index, property index, count), row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(c, p), &n)| (c, p, n))
    }

    pub fn concept_index(&self, c: &ConceptId) -> Option<usize> {
        self.concepts.binary_search(c).ok()
    }

    pub fn property_index(&self, p: &PropertySlot) -> Option<usize> {
        self.properties.binary_search(p).ok()
    }

    pub fn count(&self, c: &ConceptId, p: &PropertySlot) -> u64 {
        match (self.concept_index(c), self.property_index(p)) {
            (Some(ci), Some(pi)) => self.counts.get(&(ci, pi)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn app(&self, p: &PropertySlot, c: &ConceptId) -> bool {
        self.count(c, p) >= self.tau
    }

    /// Boolean incidence view at the current threshold.
    pub fn context(&self) -> Context {
        let cells = self
            .counts
            .iter()
            .filter(|(_, &n)| n >= self.tau)
            .map(|(&k, _)| k);
        Context::new(self.concepts.len(), self.properties.len(), cells)
    }

    /// Properties applicable to `c`, in canonical order.
    pub fn applicable(&self, c: &ConceptId) -> Result<Vec<&PropertySlot>, LatticeError> {
        let ci = self
            .concept_index(c)
            .ok_or_else(|| LatticeError::UnknownConcept(c.to_string()))?;
        Ok(self
            .counts
            .range((ci, 0)..(ci + 1, 0))
            .filter(|(_, &n)| n >= self.tau)
            .map(|(&(_, pi), _)| &self.properties[pi])
            .collect())
    }

    pub(crate) fn concept_bits<'a>(
        &self,
        cs: impl IntoIterator<Item = &'a ConceptId>,
    ) -> Result<BitSet, LatticeError> {
        let mut bits = BitSet::new(self.concepts.len());
        for c in cs {
            let i = self
                .concept_index(c)
                .ok_or_else(|| LatticeError::UnknownConcept(c.to_string()))?;
            bits.insert(i);
        }
        Ok(bits)
    }

    pub(crate) fn property_bits<'a>(
        &self,
        ps: impl IntoIterator<Item = &'a PropertySlot>,
    ) -> Result<BitSet, LatticeError> {
        let mut bits = BitSet::new(self.properties.len());
        for p in ps {
            let i = self
                .property_index(p)
                .ok_or_else(|| LatticeError::UnknownProperty(p.to_string()))?;
            bits.insert(i);
        }
        Ok(bits)
    }

    pub(crate) fn concepts_of(&self, bits: &BitSet) -> BTreeSet<ConceptId> {
        bits.iter().map(|i| self.concepts[i].clone()).collect()
    }

    pub(crate) fn properties_of(&self, bits: &BitSet) -> BTreeSet<PropertySlot> {
        bits.iter().map(|i| self.properties[i].clone()).collect()
    }

    /// `{c | ∀p ∈ ps: app(p, c)}`; the empty set maps to every concept.
    pub fn extent<'a>(
        &self,
        ps: impl IntoIterator<Item = &'a PropertySlot>,
    ) -> Result<BTreeSet<ConceptId>, LatticeError> {
        let bits = self.property_bits(ps)?;
        Ok(self.concepts_of(&self.context().extent_of(&bits)))
    }

    /// `{p | ∀c ∈ cs: app(p, c)}`; the empty set maps to every property.
    pub fn intent<'a>(
        &self,
        cs: impl IntoIterator<Item = &'a ConceptId>,
    ) -> Result<BTreeSet<PropertySlot>, LatticeError> {
        let bits = self.concept_bits(cs)?;
        Ok(self.properties_of(&self.context().intent_of(&bits)))
    }

    /// Galois closure of a concept set: `(extent(intent(cs)), intent(cs))`.
    pub fn close<'a>(
        &self,
        cs: impl IntoIterator<Item = &'a ConceptId>,
    ) -> Result<FormalConcept, LatticeError> {
        let bits = self.concept_bits(cs)?;
        let (extent, intent) = self.context().close_objects(&bits);
        Ok(FormalConcept {
            extent: self.concepts_of(&extent),
            intent: self.properties_of(&intent),
        })
    }
}

/// Predicate subsumption read off extent inclusion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyOrder {
    /// `(p, q)` with `extent({p}) ⊊ extent({q})`.
    pub subsumptions: Vec<(PropertySlot, PropertySlot)>,
    /// `(p, q)` with `p < q` and equal extents.
    pub equivalences: Vec<(PropertySlot, PropertySlot)>,
}

pub fn property_order(m: &ApplicabilityMatrix) -> PropertyOrder {
    let ctx = m.context();
    let mut out = PropertyOrder::default();
    let n = ctx.n_attributes();
    for p in 0..n {
        for q in 0..n {
            if p == q || !ctx.col(p).is_subset(ctx.col(q)) {
                continue;
            }
            let pair = (m.properties[p].clone(), m.properties[q].clone());
            if ctx.col(q).is_subset(ctx.col(p)) {
                if p < q {
                    out.equivalences.push(pair);
                }
            } else {
                out.subsumptions.push(pair);
            }
        }
    }
    out
}
