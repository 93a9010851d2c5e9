use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::model::{ConceptId, PropertySlot, Slot};

use super::bitset::BitSet;
use super::context::Context;
use super::{FormalConcept, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedTarget {
    Extent(BTreeSet<ConceptId>),
    Intent(BTreeSet<PropertySlot>),
}

/// Names for lattice nodes, given by example members or by defining properties.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSeed {
    entries: Vec<(String, SeedTarget)>,
}

impl LabelSeed {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(
        &mut self,
        label: impl Into<String>,
        target: SeedTarget,
    ) -> Result<(), LatticeError> {
        let label = label.into();
        if self.entries.iter().any(|(l, _)| *l == label) {
            return Err(LatticeError::DuplicateLabel(label));
        }
        self.entries.push((label, target));
        Ok(())
    }

    pub fn entries(&self) -> &[(String, SeedTarget)] {
        &self.entries
    }

    /// Parses `label<TAB>extent|intent<TAB>item,item,...` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let mut seeds = LabelSeed::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| LatticeError::Seed { line, message };
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let [label, side, items] = cols[..] else {
                return Err(err(format!(
                    "expected 3 tab-separated columns, found {}",
                    cols.len()
                )));
            };
            if label.is_empty() {
                return Err(err("empty label".into()));
            }
            let items = items.split(',').map(str::trim).filter(|s| !s.is_empty());
            let target = match side {
                "extent" => SeedTarget::Extent(
                    items
                        .map(|s| s.parse::<ConceptId>().map_err(|e| err(e.to_string())))
                        .collect::<Result<_, _>>()?,
                ),
                "intent" => SeedTarget::Intent(
                    items
                        .map(|s| s.parse::<PropertySlot>().map_err(|e| err(e.to_string())))
                        .collect::<Result<_, _>>()?,
                ),
                other => return Err(err(format!("side must be extent or intent, got {other:?}"))),
            };
            seeds.add(label, target).map_err(|e| err(e.to_string()))?;
        }
        Ok(seeds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeNode {
    pub labels: Vec<String>,
    pub concept: FormalConcept,
}

impl LatticeNode {
    /// The first label; unique across the lattice.
    pub fn name(&self) -> &str {
        &self.labels[0]
    }
}

/// The induced type hierarchy: formal concepts ordered by extent inclusion,
/// with cover edges running parent → child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeLattice {
    nodes: Vec<LatticeNode>,
    edges: Vec<(usize, usize)>,
    top: usize,
    bottom: usize,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl TypeLattice {
    /// Reassembles a lattice from stored parts, checking indices and names.
    pub fn from_parts(
        nodes: Vec<LatticeNode>,
        edges: Vec<(usize, usize)>,
        top: usize,
        bottom: usize,
    ) -> Result<Self, LatticeError> {
        let n = nodes.len();
        if top >= n || bottom >= n {
            return Err(LatticeError::Incomplete(
                "top or bottom index out of range".into(),
            ));
        }
        let mut names = BTreeSet::new();
        for node in &nodes {
            if node.labels.is_empty() || !names.insert(node.name().to_string()) {
                return Err(LatticeError::Incomplete(
                    "node names must be present and unique".into(),
                ));
            }
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &edges {
            if p >= n || c >= n {
                return Err(LatticeError::Incomplete(format!(
                    "edge {p}->{c} out of range"
                )));
            }
            let (pe, ce) = (&nodes[p].concept.extent, &nodes[c].concept.extent);
            if !(ce.is_subset(pe) && ce.len() < pe.len()) {
                return Err(LatticeError::Incomplete(format!(
                    "edge {p}->{c} does not shrink the extent"
                )));
            }
            parents[c].push(p);
            children[p].push(c);
        }
        for v in parents.iter_mut().chain(children.iter_mut()) {
            v.sort_unstable();
        }
        Ok(TypeLattice {
            nodes,
            edges,
            top,
            bottom,
            parents,
            children,
        })
    }

    pub fn nodes(&self) -> &[LatticeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &LatticeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.labels.iter().any(|l| l == label))
    }

    /// `a ≤ b` in the subtype order (extent inclusion).
    pub fn is_below(&self, a: usize, b: usize) -> bool {
        self.nodes[a]
            .concept
            .extent
            .is_subset(&self.nodes[b].concept.extent)
    }

    /// Shortest chain of cover edges from `from` up to `to`, both included.
    pub fn upward_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                let mut path = vec![to];
                let mut cur = to;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &p in &self.parents[x] {
                if seen.insert(p) {
                    prev.insert(p, x);
                    queue.push_back(p);
                }
            }
        }
        None
    }

    /// Most specific node whose extent contains `c`.
    pub fn object_node(&self, c: &ConceptId) -> Option<usize> {
        self.smallest_containing(std::slice::from_ref(c))
    }

    /// Most general node whose intent contains `p`; its extent is `extent({p})`.
    pub fn attribute_node(&self, p: &PropertySlot) -> Option<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.concept.intent.contains(p))
            .max_by_key(|(_, n)| n.concept.extent.len())
            .map(|(i, _)| i)
    }

    /// Least node whose extent contains every concept in `cs`.
    pub fn smallest_containing(&self, cs: &[ConceptId]) -> Option<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| cs.iter().all(|c| n.concept.extent.contains(c)))
            .min_by_key(|(_, n)| n.concept.extent.len())
            .map(|(i, _)| i)
    }

    /// Most general node whose intent contains every property in `ps`.
    pub fn largest_with(&self, ps: &BTreeSet<PropertySlot>) -> Option<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| ps.is_subset(&n.concept.intent))
            .max_by_key(|(_, n)| n.concept.extent.len())
            .map(|(i, _)| i)
    }
}

/// Index sets rebuilt from a concept list, so covers can be computed without
/// the originating matrix.
struct Reindexed {
    objects: Vec<ConceptId>,
    attributes: Vec<PropertySlot>,
    extents: Vec<BitSet>,
    intents: Vec<BitSet>,
    ctx: Context,
}

fn reindex(concepts: &[FormalConcept]) -> Reindexed {
    let objects: Vec<ConceptId> = concepts
        .iter()
        .flat_map(|c| c.extent.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let attributes: Vec<PropertySlot> = concepts
        .iter()
        .flat_map(|c| c.intent.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let oi: BTreeMap<&ConceptId, usize> = objects.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let ai: BTreeMap<&PropertySlot, usize> =
        attributes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let extents: Vec<BitSet> = concepts
        .iter()
        .map(|c| BitSet::from_indices(objects.len(), c.extent.iter().map(|x| oi[x])))
        .collect();
    let intents: Vec<BitSet> = concepts
        .iter()
        .map(|c| BitSet::from_indices(attributes.len(), c.intent.iter().map(|x| ai[x])))
        .collect();
    // row(g) is the union of the intents of every concept containing g
    let mut rows = vec![BitSet::new(attributes.len()); objects.len()];
    for (e, i) in extents.iter().zip(&intents) {
        for g in e.iter() {
            rows[g].union_with(i);
        }
    }
    let incidence: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(g, r)| r.iter().map(move |m| (g, m)))
        .collect();
    let ctx = Context::new(objects.len(), attributes.len(), incidence);
    Reindexed {
        objects,
        attributes,
        extents,
        intents,
        ctx,
    }
}

/// Orders the concepts by extent inclusion, computes cover edges and attaches
/// labels. Returns the lattice and any labeling warnings.
///
/// Seeded nodes take the seed label; other nodes are named after their most
/// specific distinguishing property (`type_HUNGRY`, `type_DRIVE.object`), or
/// failing that after a concept they introduce.
pub fn build_lattice(
    concepts: &[FormalConcept],
    seeds: &LabelSeed,
) -> Result<(TypeLattice, Vec<String>), LatticeError> {
    if concepts.is_empty() {
        return Err(LatticeError::Incomplete("no concepts".into()));
    }
    let ix = reindex(concepts);
    let mut by_intent: HashMap<&BitSet, usize> = HashMap::new();
    for (i, b) in ix.intents.iter().enumerate() {
        if by_intent.insert(b, i).is_some() {
            return Err(LatticeError::Incomplete("duplicate concept".into()));
        }
    }
    let n_obj = ix.objects.len();
    let top = (0..concepts.len())
        .find(|&i| ix.extents[i].len() == n_obj)
        .ok_or_else(|| LatticeError::Incomplete("no top concept".into()))?;
    let bottom = (0..concepts.len())
        .find(|&i| ix.intents[i].is_full())
        .ok_or_else(|| LatticeError::Incomplete("no bottom concept".into()))?;

    let mut edges = Vec::new();
    for (child, (extent, intent)) in ix.extents.iter().zip(&ix.intents).enumerate() {
        // upper covers are the maximal intents among intent ∩ row(g), g outside the extent
        let mut candidates: BTreeSet<BitSet> = BTreeSet::new();
        let mut touched = BitSet::new(n_obj);
        for m in intent.iter() {
            touched.union_with(ix.ctx.col(m));
        }
        for g in touched.iter().filter(|&g| !extent.contains(g)) {
            candidates.insert(intent.intersection(ix.ctx.row(g)));
        }
        let outside = n_obj - extent.len();
        let touched_outside = touched.iter().filter(|&g| !extent.contains(g)).count();
        if outside > touched_outside {
            candidates.insert(BitSet::new(ix.attributes.len()));
        }
        let mut sorted: Vec<BitSet> = candidates.into_iter().collect();
        sorted.sort_by_key(|b| std::cmp::Reverse(b.len()));
        let mut maximal: Vec<&BitSet> = Vec::new();
        for x in &sorted {
            if !maximal.iter().any(|y| x.is_subset(y)) {
                maximal.push(x);
            }
        }
        for x in maximal {
            let parent = *by_intent.get(x).ok_or_else(|| {
                LatticeError::Incomplete("a closure is missing from the concept list".into())
            })?;
            edges.push((parent, child));
        }
    }
    edges.sort_unstable();

    let mut labels: Vec<Vec<String>> = vec![Vec::new(); concepts.len()];
    let mut warnings = Vec::new();
    for (label, target) in seeds.entries() {
        let node = match target {
            SeedTarget::Extent(cs) => {
                let mut bits = BitSet::new(n_obj);
                for c in cs {
                    let i = ix
                        .objects
                        .binary_search(c)
                        .map_err(|_| LatticeError::UnknownConcept(c.to_string()))?;
                    bits.insert(i);
                }
                (0..concepts.len())
                    .filter(|&i| bits.is_subset(&ix.extents[i]))
                    .min_by_key(|&i| ix.extents[i].len())
            }
            SeedTarget::Intent(ps) => {
                let mut bits = BitSet::new(ix.attributes.len());
                for p in ps {
                    let i = ix
                        .attributes
                        .binary_search(p)
                        .map_err(|_| LatticeError::UnknownProperty(p.to_string()))?;
                    bits.insert(i);
                }
                (0..concepts.len())
                    .filter(|&i| bits.is_subset(&ix.intents[i]))
                    .max_by_key(|&i| ix.extents[i].len())
            }
        }
        .expect("a complete lattice has every closure");
        if let Some(first) = labels[node].first() {
            warnings.push(format!(
                "seeds {first} and {label} resolve to the same node"
            ));
        }
        labels[node].push(label.clone());
    }

    let mut parent_intents: Vec<BitSet> = vec![BitSet::new(ix.attributes.len()); concepts.len()];
    let mut child_extents: Vec<BitSet> = vec![BitSet::new(n_obj); concepts.len()];
    for &(p, c) in &edges {
        parent_intents[c].union_with(&ix.intents[p]);
        child_extents[p].union_with(&ix.extents[c]);
    }
    let mut taken: BTreeSet<String> = labels.iter().flatten().cloned().collect();
    for i in 0..concepts.len() {
        if !labels[i].is_empty() {
            continue;
        }
        let own_attr = ix.intents[i]
            .iter()
            .find(|&m| !parent_intents[i].contains(m));
        let own_obj = ix.extents[i]
            .iter()
            .find(|&g| !child_extents[i].contains(g));
        let mut name = match (own_attr, own_obj) {
            (Some(m), _) => {
                let p = &ix.attributes[m];
                match p.slot() {
                    Slot::Arg0 => format!("type_{}", p.predicate()),
                    s => format!("type_{}.{}", p.predicate(), s),
                }
            }
            (None, Some(g)) => format!("type_{}", ix.objects[g]),
            (None, None) if i == top => "top".to_string(),
            (None, None) if i == bottom => "bottom".to_string(),
            (None, None) => format!("node_{i}"),
        };
        if taken.contains(&name) {
            name = format!("{name}~{i}");
        }
        taken.insert(name.clone());
        labels[i].push(name);
    }

    let nodes = concepts
        .iter()
        .zip(labels)
        .map(|(c, labels)| LatticeNode {
            labels,
            concept: c.clone(),
        })
        .collect();
    Ok((
        TypeLattice::from_parts(nodes, edges, top, bottom)?,
        warnings,
    ))
}
