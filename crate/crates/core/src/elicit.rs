//! Mask-prompt elicitation: render prompts, cache responses as transcripts,
//! and turn numbered-list answers into concept-level records.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::{SystemTime, UNIX_EPOCH};

use regex::Regex;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{
    ConceptId, ModelError, PredicationRecord, PrimitiveRelation, PropertySlot, Slot, Subject,
};

pub const MASK: &str = "[MASK]";
pub const CONCEPT: &str = "{CONCEPT}";

#[derive(Debug, Error)]
pub enum ElicitError {
    #[error("template pattern must contain exactly one [MASK], found {0}")]
    MaskCount(usize),
    #[error("template pattern has no {{CONCEPT}} placeholder")]
    NoConcept,
    #[error("template asks for zero candidates")]
    ZeroK,
    #[error("{0} is not an elicitation dimension (use agentOf, objectOf or hasProp)")]
    Dimension(PrimitiveRelation),
    #[error("transcript {path}: {message}")]
    Transcript { path: PathBuf, message: String },
    #[error("inflection map line {line}: {message}")]
    Inflections { line: usize, message: String },
    #[error("offline and no cached transcript for prompt {key}")]
    OfflineMiss { key: String },
    #[error("endpoint: {0}")]
    Endpoint(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn slot_for(dimension: PrimitiveRelation) -> Result<Slot, ElicitError> {
    match dimension {
        PrimitiveRelation::AgentOf => Ok(Slot::Agent),
        PrimitiveRelation::ObjectOf => Ok(Slot::Object),
        PrimitiveRelation::HasProp => Ok(Slot::Arg0),
        other => Err(ElicitError::Dimension(other)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    dimension: PrimitiveRelation,
    pattern: String,
    k: usize,
}

impl PromptTemplate {
    pub fn new(
        dimension: PrimitiveRelation,
        pattern: impl Into<String>,
        k: usize,
    ) -> Result<Self, ElicitError> {
        let pattern = pattern.into();
        slot_for(dimension)?;
        let masks = pattern.matches(MASK).count();
        if masks != 1 {
            return Err(ElicitError::MaskCount(masks));
        }
        if !pattern.contains(CONCEPT) {
            return Err(ElicitError::NoConcept);
        }
        if k == 0 {
            return Err(ElicitError::ZeroK);
        }
        Ok(PromptTemplate {
            dimension,
            pattern,
            k,
        })
    }

    /// One template per dimension: agentOf, objectOf, hasProp.
    pub fn defaults(k: usize) -> Result<[PromptTemplate; 3], ElicitError> {
        Ok([
            Self::new(
                PrimitiveRelation::AgentOf,
                "The {CONCEPT} has [MASK] millions of people",
                k,
            )?,
            Self::new(
                PrimitiveRelation::ObjectOf,
                "Jon has [MASK] the {CONCEPT}",
                k,
            )?,
            Self::new(
                PrimitiveRelation::HasProp,
                "Das Kapital was a very [MASK] {CONCEPT}",
                k,
            )?,
        ])
    }

    pub fn dimension(&self) -> PrimitiveRelation {
        self.dimension
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

pub fn render_prompt(template: &PromptTemplate, concept: &ConceptId) -> String {
    let noun = if template.k == 1 {
        "replacement"
    } else {
        "replacements"
    };
    format!(
        "Give exactly {k} plausible {noun} for [MASK] in the sentence below, as a numbered list with one item per line.\n\n{sentence}\n",
        k = template.k,
        sentence = template.pattern.replace(CONCEPT, concept.lemma()),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCandidates {
    /// Normalized items, first occurrence kept.
    pub items: Vec<String>,
    /// Numbered lines matched before deduplication.
    pub captured: usize,
    /// Set when no numbered line was found.
    pub warning: bool,
}

fn numbered_line() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*\d+[.)]\s*(.+)$").expect("valid regex"))
}

pub fn parse_candidates(response: &str) -> ParsedCandidates {
    let mut seen = BTreeSet::new();
    let mut items = Vec::new();
    let mut captured = 0;
    for line in response.lines() {
        let Some(cap) = numbered_line().captures(line) else {
            continue;
        };
        let item = cap[1].trim().to_lowercase();
        if item.is_empty() {
            continue;
        }
        captured += 1;
        if seen.insert(item.clone()) {
            items.push(item);
        }
    }
    ParsedCandidates {
        warning: captured == 0,
        items,
        captured,
    }
}

/// Inverse of `parse_candidates` for well-formed input.
pub fn render_numbered(items: &[String]) -> String {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| format!("{}. {s}\n", i + 1))
        .collect()
}

pub fn candidates_to_records(
    concept: &ConceptId,
    dimension: PrimitiveRelation,
    candidates: &[String],
) -> Result<Vec<PredicationRecord>, ElicitError> {
    let slot = slot_for(dimension)?;
    candidates
        .iter()
        .map(|c| {
            let p = PropertySlot::new(c, slot)?;
            Ok(PredicationRecord::new(
                Subject::Concept(concept.clone()),
                p,
                1,
            )?)
        })
        .collect()
}

/// Surface form → lemma, read from `surface<TAB>lemma` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Inflections(BTreeMap<String, String>);

impl Inflections {
    pub fn parse(text: &str) -> Result<Self, ElicitError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| ElicitError::Inflections {
                line: i + 1,
                message: message.to_string(),
            };
            let (surface, lemma) = line
                .split_once('\t')
                .ok_or_else(|| err("expected surface<TAB>lemma"))?;
            let (surface, lemma) = (surface.trim().to_lowercase(), lemma.trim().to_lowercase());
            if surface.is_empty() || lemma.is_empty() || lemma.contains('\t') {
                return Err(err("expected surface<TAB>lemma"));
            }
            if map.insert(surface, lemma).is_some() {
                return Err(err("duplicate surface form"));
            }
        }
        Ok(Inflections(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lemma<'a>(&'a self, surface: &'a str) -> &'a str {
        self.0.get(surface).map(String::as_str).unwrap_or(surface)
    }

    /// Maps each candidate and drops duplicates created by the mapping.
    pub fn normalize(&self, candidates: &[String]) -> Vec<String> {
        let mut seen = BTreeSet::new();
        candidates
            .iter()
            .map(|c| self.lemma(c).to_string())
            .filter(|c| seen.insert(c.clone()))
            .collect()
    }
}

/// Keeps candidates appearing in at least `min_votes` of the lists, in order
/// of first appearance.
pub fn vote(lists: &[Vec<String>], min_votes: usize) -> Vec<String> {
    let mut votes: BTreeMap<&str, usize> = BTreeMap::new();
    let mut order = Vec::new();
    for list in lists {
        let distinct: BTreeSet<&str> = list.iter().map(String::as_str).collect();
        for c in list {
            if !votes.contains_key(c.as_str()) {
                order.push(c.as_str());
            }
            votes.entry(c.as_str()).or_insert(0);
        }
        for c in distinct {
            *votes.get_mut(c).expect("inserted above") += 1;
        }
    }
    order
        .into_iter()
        .filter(|c| votes[c] >= min_votes.max(1))
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub prompt: String,
    pub response: String,
    pub endpoint: String,
    /// Seconds since the Unix epoch, as text.
    pub timestamp: String,
}

fn escape_header(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('\n', "\\n")
        .replace('\r', "\\r")
}

fn unescape_header(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(format!(
                    "bad escape \\{}",
                    other.map(String::from).unwrap_or_default()
                ))
            }
        }
    }
    Ok(out)
}

impl Transcript {
    pub fn new(
        prompt: impl Into<String>,
        response: impl Into<String>,
        endpoint: impl Into<String>,
    ) -> Self {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Transcript {
            prompt: prompt.into(),
            response: response.into(),
            endpoint: endpoint.into(),
            timestamp: secs.to_string(),
        }
    }

    pub fn to_file_text(&self) -> String {
        format!(
            "PROMPT: {}\nENDPOINT: {}\nTIME: {}\n\n{}",
            escape_header(&self.prompt),
            escape_header(&self.endpoint),
            escape_header(&self.timestamp),
            self.response
        )
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut rest = text;
        let mut header = |name: &str| -> Result<String, String> {
            let (line, tail) = rest
                .split_once('\n')
                .ok_or_else(|| format!("missing {name} header"))?;
            rest = tail;
            let value = line
                .strip_prefix(name)
                .and_then(|v| v.strip_prefix(':'))
                .ok_or_else(|| format!("expected {name}: header, found {line:?}"))?;
            unescape_header(value.strip_prefix(' ').unwrap_or(value))
        };
        let prompt = header("PROMPT")?;
        let endpoint = header("ENDPOINT")?;
        let timestamp = header("TIME")?;
        if prompt.is_empty() {
            return Err("empty prompt".into());
        }
        let response = if let Some(r) = rest.strip_prefix('\n') {
            r
        } else if rest.is_empty() {
            ""
        } else {
            return Err("expected a blank line after the headers".into());
        };
        Ok(Transcript {
            prompt,
            response: response.to_string(),
            endpoint,
            timestamp,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ElicitError> {
        let text = fs::read_to_string(path).map_err(|source| ElicitError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|message| ElicitError::Transcript {
            path: path.to_path_buf(),
            message,
        })
    }
}

/// Content hash naming a prompt's cache file.
pub fn prompt_key(prompt: &str) -> String {
    hex::encode(Sha256::digest(prompt.as_bytes()))
}

/// A text-in/text-out completion service.
pub trait Endpoint: Sync {
    fn label(&self) -> String;
    fn complete(&self, prompt: &str) -> Result<String, ElicitError>;
}

/// Transcripts stored one per file, named `<sha256(prompt)>.txt`.
#[derive(Debug, Clone)]
pub struct TranscriptCache {
    dir: PathBuf,
}

impl TranscriptCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TranscriptCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, prompt: &str) -> PathBuf {
        self.dir.join(format!("{}.txt", prompt_key(prompt)))
    }

    pub fn get(&self, prompt: &str) -> Result<Option<Transcript>, ElicitError> {
        let path = self.path_for(prompt);
        if !path.exists() {
            return Ok(None);
        }
        let t = Transcript::load(&path)?;
        if t.prompt != prompt {
            return Err(ElicitError::Transcript {
                path,
                message: "stored prompt does not match its key".into(),
            });
        }
        Ok(Some(t))
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place.
    pub fn put(&self, t: &Transcript) -> Result<PathBuf, ElicitError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| ElicitError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        let path = self.path_for(&t.prompt);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io(&self.dir))?;
        tmp.write_all(t.to_file_text().as_bytes())
            .map_err(io(tmp.path()))?;
        tmp.persist(&path).map_err(|e| io(&path)(e.error))?;
        Ok(path)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FetchOptions {
    pub offline: bool,
    pub max_in_flight: usize,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            offline: false,
            max_in_flight: 4,
        }
    }
}

/// Resolves every prompt from the cache, calling the endpoint for misses
/// with at most `max_in_flight` requests outstanding. Results follow the
/// order of `prompts`.
pub fn fetch_all(
    prompts: &[String],
    cache: &TranscriptCache,
    endpoint: Option<&dyn Endpoint>,
    opts: FetchOptions,
) -> Result<Vec<Transcript>, ElicitError> {
    let mut out: Vec<Option<Transcript>> = Vec::with_capacity(prompts.len());
    let mut misses = Vec::new();
    for (i, p) in prompts.iter().enumerate() {
        let hit = cache.get(p)?;
        if hit.is_none() {
            misses.push(i);
        }
        out.push(hit);
    }
    if misses.is_empty() {
        return Ok(out.into_iter().flatten().collect());
    }
    let endpoint = match endpoint {
        Some(e) if !opts.offline => e,
        _ => {
            return Err(ElicitError::OfflineMiss {
                key: prompt_key(&prompts[misses[0]]),
            })
        }
    };
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<Transcript, ElicitError>)>> = Mutex::new(Vec::new());
    let workers = opts.max_in_flight.max(1).min(misses.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::SeqCst);
                let Some(&i) = misses.get(j) else { break };
                let prompt = &prompts[i];
                let r = endpoint.complete(prompt).and_then(|response| {
                    let t = Transcript::new(prompt.clone(), response, endpoint.label());
                    cache.put(&t)?;
                    Ok(t)
                });
                results.lock().expect("result lock").push((i, r));
            });
        }
    });
    let mut results = results.into_inner().expect("result lock");
    results.sort_by_key(|(i, _)| *i);
    for (i, r) in results {
        out[i] = Some(r?);
    }
    Ok(out.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book() -> ConceptId {
        "book".parse().unwrap()
    }

    #[test]
    fn template_validation() {
        assert!(matches!(
            PromptTemplate::new(PrimitiveRelation::HasProp, "a {CONCEPT}", 3),
            Err(ElicitError::MaskCount(0))
        ));
        assert!(matches!(
            PromptTemplate::new(PrimitiveRelation::HasProp, "[MASK] [MASK] {CONCEPT}", 3),
            Err(ElicitError::MaskCount(2))
        ));
        assert!(matches!(
            PromptTemplate::new(PrimitiveRelation::HasProp, "a [MASK] thing", 3),
            Err(ElicitError::NoConcept)
        ));
        assert!(matches!(
            PromptTemplate::new(PrimitiveRelation::HasProp, "a [MASK] {CONCEPT}", 0),
            Err(ElicitError::ZeroK)
        ));
        assert!(matches!(
            PromptTemplate::new(PrimitiveRelation::InState, "a [MASK] {CONCEPT}", 1),
            Err(ElicitError::Dimension(_))
        ));
    }

    #[test]
    fn rendering() {
        let [agent, object, prop] = PromptTemplate::defaults(25).unwrap();
        let p = render_prompt(&object, &book());
        assert!(p.contains("Jon has [MASK] the book"));
        assert!(p.starts_with("Give exactly 25 plausible replacements"));
        assert!(render_prompt(&prop, &book()).contains("a very [MASK] book"));
        assert!(render_prompt(&agent, &book()).contains("The book has [MASK] millions of people"));
        let one = PromptTemplate::new(PrimitiveRelation::HasProp, "a [MASK] {CONCEPT}", 1).unwrap();
        assert!(
            render_prompt(&one, &book()).starts_with("Give exactly 1 plausible replacement for")
        );
    }

    #[test]
    fn parsing() {
        let none = parse_candidates("no list here");
        assert!(none.items.is_empty() && none.warning && none.captured == 0);
        let dup = parse_candidates("1. Wrote\n1. wrote");
        assert_eq!(dup.items, vec!["wrote"]);
        assert_eq!(dup.captured, 2);
        let mixed = parse_candidates("Here you go:\n  1) Heavy \n2.light\nnot 3. this\n");
        assert_eq!(mixed.items, vec!["heavy", "light"]);
    }

    #[test]
    fn records_from_candidates() {
        let recs =
            candidates_to_records(&book(), PrimitiveRelation::ObjectOf, &["wrote".into()]).unwrap();
        assert_eq!(recs[0].property().to_string(), "WROTE/object");
        let recs =
            candidates_to_records(&book(), PrimitiveRelation::HasProp, &["influential".into()])
                .unwrap();
        assert_eq!(recs[0].property().to_string(), "INFLUENTIAL/arg0");
        assert!(
            candidates_to_records(&book(), PrimitiveRelation::AgentOf, &[])
                .unwrap()
                .is_empty()
        );
        assert!(candidates_to_records(&book(), PrimitiveRelation::HasValue, &[]).is_err());
    }

    #[test]
    fn inflections_and_votes() {
        let inf = Inflections::parse("# map\nwrote\twrite\nwritten\twrite\n").unwrap();
        assert_eq!(
            inf.normalize(&["wrote".into(), "read".into(), "written".into()]),
            vec!["write", "read"]
        );
        assert!(Inflections::parse("wrote write").is_err());
        assert!(Inflections::parse("a\tb\na\tc").is_err());
        let lists = vec![
            vec!["a".to_string(), "b".into()],
            vec!["b".into(), "c".into(), "b".into()],
        ];
        assert_eq!(vote(&lists, 1), vec!["a", "b", "c"]);
        assert_eq!(vote(&lists, 2), vec!["b"]);
    }

    #[test]
    fn transcript_round_trip() {
        let t = Transcript {
            prompt: "line one\nline \\two".into(),
            response: "1. x\n\n2. y\n".into(),
            endpoint: "local".into(),
            timestamp: "0".into(),
        };
        assert_eq!(Transcript::parse(&t.to_file_text()).unwrap(), t);
        assert!(Transcript::parse("PROMPT: \nENDPOINT: e\nTIME: 0\n\n").is_err());
        assert!(Transcript::parse("ENDPOINT: e\n").is_err());
    }

    struct Fixed(AtomicUsize);

    impl Endpoint for Fixed {
        fn label(&self) -> String {
            "fixed".into()
        }
        fn complete(&self, prompt: &str) -> Result<String, ElicitError> {
            self.0.fetch_add(1, Ordering::SeqCst);
            Ok(format!("1. {}\n", prompt.len()))
        }
    }

    #[test]
    fn cache_then_offline() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TranscriptCache::new(dir.path().join("t"));
        let prompts: Vec<String> = (0..7).map(|i| "p".repeat(i + 1)).collect();
        let offline = FetchOptions {
            offline: true,
            max_in_flight: 3,
        };
        assert!(matches!(
            fetch_all(&prompts, &cache, None, offline),
            Err(ElicitError::OfflineMiss { .. })
        ));
        let ep = Fixed(AtomicUsize::new(0));
        let online = FetchOptions {
            offline: false,
            max_in_flight: 3,
        };
        let got = fetch_all(&prompts, &cache, Some(&ep), online).unwrap();
        assert_eq!(ep.0.load(Ordering::SeqCst), 7);
        assert_eq!(got[3].response, "1. 4\n");
        let again = fetch_all(&prompts, &cache, Some(&ep), offline).unwrap();
        assert_eq!(again, got);
        assert_eq!(ep.0.load(Ordering::SeqCst), 7);
        assert_eq!(fs::read_dir(cache.dir()).unwrap().count(), 7);
    }
}
