//! File formats: JSON-lines records, versioned matrix and lattice snapshots,
//! DOT export, and the project directory layout that holds them.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{ApplicabilityMatrix, FormalConcept, LatticeError, LatticeNode, TypeLattice};
use crate::model::{
    parse_quantity, Amount, Complement, ConceptId, IndividualId, MeasureValue, ModelError,
    PredicationRecord, PropertySlot, Subject,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("records line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("{what} snapshot: {message}")]
    Snapshot { what: &'static str, message: String },
    #[error("{what} snapshot has format version {found}, this build reads version {expected}")]
    VersionMismatch {
        what: &'static str,
        found: u64,
        expected: u32,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_text(path: &Path) -> Result<String, StoreError> {
    fs::read_to_string(path).map_err(io_err(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), StoreError> {
    fs::write(path, text).map_err(io_err(path))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RecordLine {
    subject: String,
    subject_kind: String,
    predicate: String,
    slot: String,
    count: u32,
    sentence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    same: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measure: Option<MeasureLine>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureLine {
    attribute: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
}

impl From<&PredicationRecord> for RecordLine {
    fn from(r: &PredicationRecord) -> Self {
        let (mut kind, mut same, mut measure) = (None, None, None);
        match r.complement() {
            Some(Complement::Kind(k)) => kind = Some(k.to_string()),
            Some(Complement::Same(i)) => same = Some(i.to_string()),
            Some(Complement::Measure(m)) => {
                measure = Some(MeasureLine {
                    attribute: m.attribute().to_string(),
                    quantity: m.amount().map(|a| a.quantity().to_string()),
                    unit: m.amount().map(|a| a.unit().to_string()),
                })
            }
            None => {}
        }
        RecordLine {
            subject: r.subject().to_string(),
            subject_kind: r.level().as_str().to_string(),
            predicate: r.property().predicate().to_string(),
            slot: r.property().slot().to_string(),
            count: r.count(),
            sentence: r.sentence().map(str::to_string),
            kind,
            same,
            measure,
        }
    }
}

impl TryFrom<RecordLine> for PredicationRecord {
    type Error = ModelError;

    fn try_from(l: RecordLine) -> Result<Self, Self::Error> {
        let subject = match l.subject_kind.as_str() {
            "individual" => Subject::Individual(IndividualId::new(l.subject)?),
            "concept" => Subject::Concept(l.subject.parse()?),
            _ => {
                return Err(ModelError::BadIndividual(format!(
                    "subjectKind {:?}",
                    l.subject_kind
                )))
            }
        };
        let property = PropertySlot::new(&l.predicate, l.slot.parse()?)?;
        let mut rec = PredicationRecord::new(subject, property, l.count)?;
        if let Some(s) = l.sentence {
            rec = rec.with_sentence(s);
        }
        let complement = match (l.kind, l.same, l.measure) {
            (Some(k), None, None) => Some(Complement::Kind(k.parse()?)),
            (None, Some(i), None) => Some(Complement::Same(IndividualId::new(i)?)),
            (None, None, Some(m)) => {
                let amount = match (m.quantity, m.unit) {
                    (Some(q), Some(u)) => Some(Amount::new(parse_quantity(&q)?.0, u)?),
                    (None, None) => None,
                    _ => return Err(ModelError::EmptyMeasureField("quantity/unit pair")),
                };
                Some(Complement::Measure(MeasureValue::new(m.attribute, amount)?))
            }
            (None, None, None) => None,
            _ => {
                return Err(ModelError::BadQuantity(
                    "a record carries at most one complement".into(),
                ))
            }
        };
        if let Some(c) = complement {
            rec = rec.with_complement(c);
        }
        Ok(rec)
    }
}

/// One JSON object per line.
pub fn write_records(records: &[PredicationRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(&RecordLine::from(r)).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn read_records(text: &str) -> Result<Vec<PredicationRecord>, StoreError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| StoreError::Record {
            line: i + 1,
            message,
        };
        let parsed: RecordLine = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        out.push(PredicationRecord::try_from(parsed).map_err(|e| err(e.to_string()))?);
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct MatrixSnapshot {
    format_version: u32,
    kind: String,
    tau: u64,
    concepts: Vec<String>,
    properties: Vec<String>,
    /// `[conceptIndex, propertyIndex, count]`
    counts: Vec<(usize, usize, u64)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct LatticeSnapshot {
    format_version: u32,
    kind: String,
    /// Subsumptions hold relative to the evidence seen: missing evidence reads
    /// as "not sensible".
    evidence_relative: bool,
    top: usize,
    bottom: usize,
    nodes: Vec<NodeSnapshot>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeSnapshot {
    id: usize,
    labels: Vec<String>,
    extent: Vec<String>,
    intent: Vec<String>,
}

fn check_header(what: &'static str, text: &str) -> Result<serde_json::Value, StoreError> {
    let snap = |message: String| StoreError::Snapshot { what, message };
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| snap(e.to_string()))?;
    let found = v
        .get("formatVersion")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| snap("missing formatVersion".into()))?;
    if found != u64::from(FORMAT_VERSION) {
        return Err(StoreError::VersionMismatch {
            what,
            found,
            expected: FORMAT_VERSION,
        });
    }
    if v.get("kind").and_then(serde_json::Value::as_str) != Some(what) {
        return Err(snap(format!("expected kind {what:?}")));
    }
    Ok(v)
}

pub fn matrix_to_json(m: &ApplicabilityMatrix) -> String {
    let snap = MatrixSnapshot {
        format_version: FORMAT_VERSION,
        kind: "matrix".into(),
        tau: m.tau(),
        concepts: m.concepts().iter().map(ToString::to_string).collect(),
        properties: m.properties().iter().map(ToString::to_string).collect(),
        counts: m.cells().collect(),
    };
    let mut s = serde_json::to_string_pretty(&snap).expect("matrix serializes");
    s.push('\n');
    s
}

pub fn matrix_from_json(text: &str) -> Result<ApplicabilityMatrix, StoreError> {
    let what = "matrix";
    let snap_err = |message: String| StoreError::Snapshot { what, message };
    let v = check_header(what, text)?;
    let snap: MatrixSnapshot = serde_json::from_value(v).map_err(|e| snap_err(e.to_string()))?;
    let concepts: Vec<ConceptId> = snap
        .concepts
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()
        .map_err(|e: ModelError| snap_err(e.to_string()))?;
    let properties: Vec<PropertySlot> = snap
        .properties
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()
        .map_err(|e: ModelError| snap_err(e.to_string()))?;
    let mut entries = Vec::with_capacity(snap.counts.len());
    for (c, p, n) in snap.counts {
        let (Some(c), Some(p)) = (concepts.get(c), properties.get(p)) else {
            return Err(snap_err(format!("cell ({c}, {p}) out of range")));
        };
        entries.push(((c.clone(), p.clone()), n));
    }
    Ok(ApplicabilityMatrix::with_universe(
        concepts, properties, entries, snap.tau,
    )?)
}

pub fn lattice_to_json(l: &TypeLattice) -> String {
    let snap = LatticeSnapshot {
        format_version: FORMAT_VERSION,
        kind: "lattice".into(),
        evidence_relative: true,
        top: l.top(),
        bottom: l.bottom(),
        nodes: l
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| NodeSnapshot {
                id,
                labels: n.labels.clone(),
                extent: n.concept.extent.iter().map(ToString::to_string).collect(),
                intent: n.concept.intent.iter().map(ToString::to_string).collect(),
            })
            .collect(),
        edges: l.edges().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&snap).expect("lattice serializes");
    s.push('\n');
    s
}

pub fn lattice_from_json(text: &str) -> Result<TypeLattice, StoreError> {
    let what = "lattice";
    let snap_err = |message: String| StoreError::Snapshot { what, message };
    let v = check_header(what, text)?;
    let snap: LatticeSnapshot = serde_json::from_value(v).map_err(|e| snap_err(e.to_string()))?;
    let mut nodes = Vec::with_capacity(snap.nodes.len());
    for (i, n) in snap.nodes.into_iter().enumerate() {
        if n.id != i {
            return Err(snap_err(format!(
                "node ids must be sequential, found {} at position {i}",
                n.id
            )));
        }
        let extent: BTreeSet<ConceptId> = n
            .extent
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()
            .map_err(|e: ModelError| snap_err(e.to_string()))?;
        let intent: BTreeSet<PropertySlot> = n
            .intent
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()
            .map_err(|e: ModelError| snap_err(e.to_string()))?;
        nodes.push(LatticeNode {
            labels: n.labels,
            concept: FormalConcept { extent, intent },
        });
    }
    Ok(TypeLattice::from_parts(
        nodes,
        snap.edges,
        snap.top,
        snap.bottom,
    )?)
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: one node per lattice node, labeled with its names and
/// intent size, and one edge per cover pair, parent → child.
pub fn lattice_to_dot(l: &TypeLattice) -> String {
    let mut out = String::from(
        "// subsumptions are evidence-relative: missing evidence reads as not sensible\n",
    );
    out.push_str("digraph lattice {\n  node [shape=box];\n");
    for n in l.nodes() {
        let label = format!(
            "{}\\n|intent|={}",
            n.labels.join(" / "),
            n.concept.intent.len()
        );
        let label = label.replace('"', "\\\"");
        out.push_str(&format!(
            "  {} [label=\"{}\"];\n",
            dot_quote(n.name()),
            label
        ));
    }
    for &(p, c) in l.edges() {
        out.push_str(&format!(
            "  {} -> {};\n",
            dot_quote(l.node(p).name()),
            dot_quote(l.node(c).name())
        ));
    }
    out.push_str("}\n");
    out
}

/// Directory layout of a project.
#[derive(Debug, Clone)]
pub struct ProjectStore {
    root: PathBuf,
}

impl ProjectStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ProjectStore { root: root.into() }
    }

    pub fn create(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let store = Self::new(root);
        fs::create_dir_all(&store.root).map_err(io_err(&store.root))?;
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn records_path(&self) -> PathBuf {
        self.root.join("records.jsonl")
    }

    pub fn lexicon_path(&self) -> PathBuf {
        self.root.join("lexicon.tsv")
    }

    pub fn matrix_path(&self) -> PathBuf {
        self.root.join("matrix.json")
    }

    pub fn lattice_path(&self) -> PathBuf {
        self.root.join("lattice.json")
    }

    pub fn transcripts_dir(&self) -> PathBuf {
        self.root.join("transcripts")
    }

    pub fn save_matrix(&self, m: &ApplicabilityMatrix) -> Result<(), StoreError> {
        write_text(&self.matrix_path(), &matrix_to_json(m))
    }

    pub fn load_matrix(&self) -> Result<ApplicabilityMatrix, StoreError> {
        matrix_from_json(&read_text(&self.matrix_path())?)
    }

    pub fn save_lattice(&self, l: &TypeLattice) -> Result<(), StoreError> {
        write_text(&self.lattice_path(), &lattice_to_json(l))
    }

    pub fn load_lattice(&self) -> Result<TypeLattice, StoreError> {
        lattice_from_json(&read_text(&self.lattice_path())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{extract, Tagger};
    use crate::lattice::{build_lattice, build_matrix, enumerate_concepts, LabelSeed};
    use crate::nominal::PredicateLexicon;

    #[test]
    fn records_keep_complements() {
        let tagger = Tagger::default();
        let lex = PredicateLexicon::seed();
        let mut recs = Vec::new();
        for s in [
            "Frido is a dog",
            "JFK is John Fitzgerald Kennedy",
            "John is 5'10\" tall",
            "heavy car",
        ] {
            recs.extend(extract(&tagger.tag(s).unwrap(), &lex));
        }
        let text = write_records(&recs);
        assert_eq!(read_records(&text).unwrap(), recs);
        assert!(text.lines().next().unwrap().starts_with(
            r#"{"subject":"Frido","subjectKind":"individual","predicate":"ISA","slot":"arg0","count":1,"sentence":"Frido is a dog","kind":"dog"}"#
        ));
    }

    #[test]
    fn bad_record_lines() {
        let err = read_records("\n{\"subject\":\"x\"}\n").unwrap_err();
        assert!(matches!(err, StoreError::Record { line: 2, .. }));
        let zero = r#"{"subject":"car","subjectKind":"concept","predicate":"HEAVY","slot":"arg0","count":0,"sentence":null}"#;
        assert!(read_records(zero).is_err());
    }

    fn sample() -> (ApplicabilityMatrix, TypeLattice) {
        let recs: Vec<PredicationRecord> = [
            ("dog", "OLD"),
            ("dog", "HUNGRY"),
            ("rock", "OLD"),
            ("rock", "HEAVY"),
        ]
        .iter()
        .map(|(c, p)| {
            PredicationRecord::new(Subject::Concept(c.parse().unwrap()), p.parse().unwrap(), 2)
                .unwrap()
        })
        .collect();
        let m = build_matrix(&recs, 1).unwrap();
        let (l, _) = build_lattice(&enumerate_concepts(&m).unwrap(), &LabelSeed::new()).unwrap();
        (m, l)
    }

    #[test]
    fn snapshots_round_trip() {
        let (m, l) = sample();
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
        assert_eq!(lattice_from_json(&lattice_to_json(&l)).unwrap(), l);
    }

    #[test]
    fn version_mismatch_fails_loudly() {
        let (m, l) = sample();
        let text = matrix_to_json(&m).replace("\"formatVersion\": 1", "\"formatVersion\": 2");
        assert!(matches!(
            matrix_from_json(&text),
            Err(StoreError::VersionMismatch { found: 2, .. })
        ));
        let text = lattice_to_json(&l).replace("\"formatVersion\": 1", "\"formatVersion\": 0");
        assert!(matches!(
            lattice_from_json(&text),
            Err(StoreError::VersionMismatch { found: 0, .. })
        ));
        assert!(matches!(
            lattice_from_json(&matrix_to_json(&m)),
            Err(StoreError::Snapshot { .. })
        ));
    }

    #[test]
    fn dot_shape() {
        let (_, l) = sample();
        let dot = lattice_to_dot(&l);
        assert_eq!(dot.matches(" -> ").count(), l.edges().len());
        assert!(dot.contains("\"type_OLD\" -> \"type_HUNGRY\";"));
        assert!(dot.contains("[label=\"type_OLD\\n|intent|=1\"]"));
    }
}
